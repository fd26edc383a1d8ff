#include "anisofield/cli.hpp"

int main(int argc, char** argv) { return anisofield::cli::run(argc, argv); }
