#include "specal/cli.hpp"

int main(int argc, char** argv) { return specal::cli::run(argc, argv); }
