#include "commands.hpp"

int main(int argc, char** argv) { return itx::cli::run(argc, argv); }
