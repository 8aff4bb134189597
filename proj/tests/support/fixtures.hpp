#pragma once

#include <string>

#include "pdl/io.hpp"

#ifndef PDL_FIXTURES
#error "PDL_FIXTURES must point at the fixture directory"
#endif

namespace pdl::fixtures {

inline std::string path(const std::string& name) { return std::string(PDL_FIXTURES) + "/" + name; }
inline CyclicPreProof load(const std::string& name) { return parse_proof(read_file(path(name))); }

}  // namespace pdl::fixtures
