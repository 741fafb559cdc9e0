#include "cli.hpp"

int main(int argc, char** argv) { return phystrack::cli::run(argc, argv); }
