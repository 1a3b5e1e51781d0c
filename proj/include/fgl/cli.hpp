#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fgl::cli {

// Exit codes: 0 ran, 1 usage error, 2 internal invariant violation
// (a pipeline disagreeing with the naive oracle in --check mode).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace fgl::cli
