#include "pnph/app.hpp"

int main(int argc, char** argv) { return pnph::cli_main(argc, argv); }
