#include "mptp/quadrature.hpp"

namespace mptp::detail {

namespace {

const GlPoint kGl4[] = {
    {-0.86113631159405257522, 0.34785484513745385737},
    {-0.33998104358485626480, 0.65214515486254614263},
    {0.33998104358485626480, 0.65214515486254614263},
    {0.86113631159405257522, 0.34785484513745385737},
};

const GlPoint kGl8[] = {
    {-0.96028985649753623168, 0.10122853629037625915},
    {-0.79666647741362673959, 0.22238103445337447054},
    {-0.52553240991632898582, 0.31370664587788728734},
    {-0.18343464249564980494, 0.36268378337836198297},
    {0.18343464249564980494, 0.36268378337836198297},
    {0.52553240991632898582, 0.31370664587788728734},
    {0.79666647741362673959, 0.22238103445337447054},
    {0.96028985649753623168, 0.10122853629037625915},
};

const GlPoint kGl16[] = {
    {-0.98940093499164993260, 0.027152459411754094852},
    {-0.94457502307323257608, 0.062253523938647892863},
    {-0.86563120238783174388, 0.095158511682492784810},
    {-0.75540440835500303390, 0.124628971255533872050},
    {-0.61787624440264374845, 0.149595988816576732080},
    {-0.45801677765722738634, 0.169156519395002538190},
    {-0.28160355077925891323, 0.182603415044923588870},
    {-0.095012509837637440185, 0.189450610455068496290},
    {0.095012509837637440185, 0.189450610455068496290},
    {0.28160355077925891323, 0.182603415044923588870},
    {0.45801677765722738634, 0.169156519395002538190},
    {0.61787624440264374845, 0.149595988816576732080},
    {0.75540440835500303390, 0.124628971255533872050},
    {0.86563120238783174388, 0.095158511682492784810},
    {0.94457502307323257608, 0.062253523938647892863},
    {0.98940093499164993260, 0.027152459411754094852},
};

}  // namespace

const GlPoint* gl_table(int order) {
  switch (order) {
    case 4:
      return kGl4;
    case 8:
      return kGl8;
    case 16:
      return kGl16;
    default:
      throw ConfigError("gauss_legendre: unsupported order " + std::to_string(order) +
                        " (use 4, 8, or 16)");
  }
}

}  // namespace mptp::detail
