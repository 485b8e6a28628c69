#include "daekit/cli.hpp"

int main(int argc, char** argv) { return daekit::cli::main(argc, argv); }
