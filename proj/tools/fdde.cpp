#include <iostream>

#include "fdde/cli.hpp"
#include "fdde/errors.hpp"

int main(int argc, char** argv) {
  using namespace fdde;
  try {
    const cli::RunConfig cfg = cli::parse_args(argc, argv);
    return cli::run(cfg, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << cli::diagnostic(e.kind(), e.what()) << '\n';
    return cli::exit_code::kUsage;
  } catch (const ValidationError& e) {
    std::cerr << cli::diagnostic(e.kind(), e.what()) << '\n';
    return cli::exit_code::kValidation;
  } catch (const Error& e) {
    std::cerr << cli::diagnostic(e.kind(), e.what()) << '\n';
    return cli::exit_code::kNumerical;
  }
}
