#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "c0mass/scenario.hpp"

#ifndef C0MASS_LAB_BIN
#error "C0MASS_LAB_BIN must name the c0mass-lab binary"
#endif

namespace {

struct Run {
    int status = 0;
    std::string err;
};

Run lab(const std::string& args) {
    const std::string errf = "cli_stderr.txt";
    std::string cmd = std::string(C0MASS_LAB_BIN) + " " + args + " 2> " + errf + " > /dev/null";
    int rc = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream f(errf);
    std::stringstream ss;
    ss << f.rdbuf();
    r.err = ss.str();
    std::remove(errf.c_str());
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

}  // namespace

TEST_CASE("flat mass scenario writes zero rows with unit headers and a manifest") {
    Run r = lab("mass --dim 3 --metric flat --r 20,40 --out cli_flat.csv");
    REQUIRE(r.status == 0);
    std::istringstream csv(slurp("cli_flat.csv"));
    std::string head, line;
    std::getline(csv, head);
    CHECK(head.find("r[length]") != std::string::npos);
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        while (std::getline(ls, cell, ',')) CHECK(std::stod(cell) == 0.0);
    }
    CHECK(rows == 2);
    std::string man = slurp("cli_flat.csv.manifest");
    CHECK(man.find("metric") != std::string::npos);
    CHECK(man.find("constant") != std::string::npos);
    std::remove("cli_flat.csv");
    std::remove("cli_flat.csv.manifest");
}

TEST_CASE("config missing dim is rejected and names the key") {
    write("cli_nodim.cfg", "scenario = mass\nmetric = flat\nout = cli_nodim.csv\n");
    Run r = lab("mass --config cli_nodim.cfg");
    CHECK(r.status != 0);
    CHECK(r.err.find("dim") != std::string::npos);
    std::remove("cli_nodim.cfg");
}

TEST_CASE("config errors carry line numbers and admissibility conditions") {
    write("cli_bad.cfg", "# comment\nscenario = mass\ndim = 3\nthis line is wrong\n");
    Run r = lab("mass --config cli_bad.cfg");
    CHECK(r.status != 0);
    CHECK(r.err.find("line 4") != std::string::npos);

    write("cli_tau.cfg", "scenario = monotonicity\ndim = 3\nmetric = powerlaw{c=0.1,tau=0.4}\nout = x.csv\n");
    r = lab("monotonicity --config cli_tau.cfg");
    CHECK(r.status != 0);
    CHECK(r.err.find("tau > (n-2)/2") != std::string::npos);

    write("cli_unknown.cfg", "scenario = mass\ndim = 3\nbogus = 1\nout = x.csv\n");
    r = lab("mass --config cli_unknown.cfg");
    CHECK(r.status != 0);
    CHECK(r.err.find("line 3") != std::string::npos);
    for (const char* f : {"cli_bad.cfg", "cli_tau.cfg", "cli_unknown.cfg"}) std::remove(f);
}

TEST_CASE("config entries override flags") {
    write("cli_over.cfg", "scenario = mass\ndim = 3\nr = 30\n");
    Run r = lab("mass --config cli_over.cfg --r 20,40 --metric 'schwarzschild-lo{m=1}' --out cli_over.csv");
    REQUIRE(r.status == 0);
    std::istringstream csv(slurp("cli_over.csv"));
    std::string head, line;
    std::getline(csv, head);
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        CHECK(std::stod(line.substr(0, line.find(','))) == 30.0);
    }
    CHECK(rows == 1);
    std::remove("cli_over.cfg");
    std::remove("cli_over.csv");
    std::remove("cli_over.csv.manifest");
}

TEST_CASE("identical scenarios give byte-identical output") {
    const std::string args = "glue --dim 3 --map 'perturbed-isometry{seed=2,shift=1,eps=0.001,bump=1}' --r 1 --samples 30 --out ";
    REQUIRE(lab(args + "cli_g1.csv").status == 0);
    REQUIRE(lab(args + "cli_g2.csv").status == 0);
    CHECK(slurp("cli_g1.csv") == slurp("cli_g2.csv"));
    for (const char* f : {"cli_g1.csv", "cli_g2.csv", "cli_g1.csv.manifest", "cli_g2.csv.manifest"}) std::remove(f);
}

TEST_CASE("testfn scenario and the in-process parser") {
    Run r = lab("testfn --dim 3 --phi 0.95,1.05 --theta 1e-5 --stride 256 --out cli_tf.csv");
    REQUIRE(r.status == 0);
    CHECK(slurp("cli_tf.csv").rfind("t[", 0) == 0);
    std::remove("cli_tf.csv");
    std::remove("cli_tf.csv.manifest");

    c0m::Scenario s;
    std::istringstream in("scenario = testfn\ndim = 3\ntheta = 1\n");
    c0m::parse_config(in, s);
    CHECK_THROWS_AS(c0m::validate(s), c0m::ConfigError);
    CHECK(lab("accept no.such.criterion").status != 0);
}
