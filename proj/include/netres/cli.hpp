#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netres {

// Exit 0 on success, 1 on domain errors (with a JSON diagnostic on out),
// 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netres
