#include <iostream>
#include <string>

#include "acceptance/suite.hpp"
#include "c0mass/parallel.hpp"

int main(int argc, char** argv) {
    c0m::configure_threads();
    std::string filter = argc > 1 ? argv[1] : "";
    auto res = c0m::acceptance::run_acceptance(filter, std::cout);
    for (const auto& r : res)
        if (!r.pass) return 1;
    return res.empty() ? 1 : 0;
}
