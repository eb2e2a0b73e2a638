#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance_suite.hpp"

int main(int argc, char** argv) {
    using hmenc::acceptance::Level;
    Level level = Level::Full;
    std::string cli;
    if (const char* env = std::getenv("HMENC_CLI")) cli = env;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--level" && i + 1 < argc) {
            std::string v = argv[++i];
            if (v == "desk")
                level = Level::Desk;
            else if (v == "full")
                level = Level::Full;
            else {
                std::cerr << "unknown level: " << v << "\n";
                return 2;
            }
        } else if (arg == "--cli" && i + 1 < argc) {
            cli = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--level desk|full] [--cli <hmenc binary>]\n";
            return 2;
        }
    }
    return hmenc::acceptance::run_all(level, cli, std::cout) ? 0 : 1;
}
