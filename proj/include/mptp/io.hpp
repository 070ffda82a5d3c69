#pragma once

#include <string>

#include "mptp/path.hpp"

namespace mptp {

// Shortest exact decimal form of a double (17 significant digits).
std::string format_double(double v);

// CSV with header "t,psi_1,...,psi_k"; values at full double precision so
// reruns and parse-backs are byte-exact.
void write_path_csv(const Path& path, const std::string& filename);
Path read_path_csv(const std::string& filename);

void write_text_file(const std::string& filename, const std::string& content);
std::string read_text_file(const std::string& filename);

}  // namespace mptp
