#include "lenselast/cli.hpp"

int main(int argc, char** argv) { return lens::cli::run(argc, argv); }
