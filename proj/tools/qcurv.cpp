#include "qcurv/cli.hpp"

int main(int argc, char** argv) { return qcurv::cli::run(argc, argv); }
