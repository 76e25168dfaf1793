// Standalone DIMACS solver around the embedded CDCL engine. Prints
// SAT-competition style output so it can also serve as a subprocess backend.

#include <fstream>
#include <iostream>

#include "mdsat/solver.hpp"

int main(int argc, char** argv) {
    if (argc < 2 || argc > 3) {
        std::cerr << "usage: " << argv[0] << " <cnf-file> [time-limit-seconds]\n";
        return 2;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << "cannot open " << argv[1] << "\n";
        return 2;
    }
    try {
        mdsat::Cnf cnf = mdsat::Cnf::from_dimacs(in);
        double limit = argc == 3 ? std::stod(argv[2]) : 0.0;
        mdsat::CdclSolver solver(cnf);
        mdsat::SolveResult r = solver.solve({}, limit);
        switch (r.status) {
        case mdsat::SolveStatus::Sat: {
            std::cout << "s SATISFIABLE\n";
            std::cout << "v";
            for (int v = 1; v <= cnf.num_vars; ++v)
                std::cout << ' ' << (r.model[v] ? v : -v);
            std::cout << " 0\n";
            return 10;
        }
        case mdsat::SolveStatus::Unsat:
            std::cout << "s UNSATISFIABLE\n";
            return 20;
        default:
            std::cout << "s UNKNOWN\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
