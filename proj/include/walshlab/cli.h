#ifndef WALSHLAB_CLI_H_
#define WALSHLAB_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace walshlab {

// Entry point of the walsh-lab command line. `args` excludes the program
// name. Returns 0 on success, 1 when a verification check fails and 2 on a
// usage or input error (with a one-line diagnostic on `err`).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace walshlab

#endif  // WALSHLAB_CLI_H_
