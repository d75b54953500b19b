#include <exception>
#include <iostream>

#include "eraser/output.hpp"
#include "eraser/run_config.hpp"

int main(int argc, char** argv) {
  eraser::RunConfig cfg;
  try {
    cfg = eraser::parse_config(argc, argv);
  } catch (const eraser::HelpRequested& h) {
    std::cout << h.what();
    return 0;
  } catch (const eraser::UsageError& e) {
    std::cerr << "eraser_sim: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  try {
    return eraser::run_scan(cfg);
  } catch (const eraser::IoError& e) {
    std::cerr << "eraser_sim: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "eraser_sim: error: " << e.what() << '\n';
    return 1;
  }
}
