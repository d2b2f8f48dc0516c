#include "stefanlie/cli.hpp"

int main(int argc, char** argv) { return stefanlie::cli::main(argc, argv); }
