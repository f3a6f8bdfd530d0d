#pragma once

#include <string>
#include <vector>

namespace seqmeas {
namespace cli {

// Exit codes: 0 success, 1 validation failure, 2 usage error,
// 3 numerical-consistency error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace cli
}  // namespace seqmeas
