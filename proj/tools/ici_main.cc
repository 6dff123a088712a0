#include "ici/cli.h"

int main(int argc, char** argv) { return ici::cli::main_entry(argc, argv); }
