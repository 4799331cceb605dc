#include <CLI11.hpp>
int main(int argc, char** argv) {
    CLI::App app{"fsi_sim"};
    CLI11_PARSE(app, argc, argv);
    return 0;
}
