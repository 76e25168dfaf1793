#include "mdsat/cnf.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mdsat {

void Cnf::add_clause(Clause c) {
    if (c.empty()) throw std::invalid_argument("empty clause");
    for (Lit l : c) {
        if (l == 0 || std::abs(l) > num_vars)
            throw std::invalid_argument("literal out of range");
    }
    clauses.push_back(std::move(c));
}

std::string Cnf::to_dimacs() const {
    std::ostringstream out;
    out << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
    for (const Clause& c : clauses) {
        for (Lit l : c) out << l << ' ';
        out << "0\n";
    }
    return out.str();
}

Cnf Cnf::from_dimacs(std::istream& in) {
    Cnf cnf;
    std::string line;
    bool have_header = false;
    std::size_t expected = 0;
    Clause cur;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == 'p') {
            std::istringstream hs(line);
            std::string p, fmt;
            hs >> p >> fmt >> cnf.num_vars >> expected;
            if (fmt != "cnf") throw std::runtime_error("not a DIMACS cnf file");
            have_header = true;
            continue;
        }
        std::istringstream ls(line);
        Lit l;
        while (ls >> l) {
            if (l == 0) {
                cnf.add_clause(cur);
                cur.clear();
            } else {
                cur.push_back(l);
            }
        }
    }
    if (!have_header) throw std::runtime_error("missing DIMACS header");
    if (!cur.empty()) throw std::runtime_error("unterminated clause");
    if (cnf.clauses.size() != expected)
        throw std::runtime_error("clause count differs from header");
    return cnf;
}

std::string VariableMap::to_json() const {
    nlohmann::json j;
    j["input_vars"] = input_vars;
    j["output_vars"] = output_vars;
    j["chaining_vars"] = chaining_vars;
    j["switch_vars"] = switch_vars;
    return j.dump(2);
}

VariableMap VariableMap::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    VariableMap m;
    m.input_vars = j.at("input_vars").get<std::vector<Lit>>();
    m.output_vars = j.at("output_vars").get<std::vector<Lit>>();
    m.chaining_vars = j.at("chaining_vars").get<std::vector<std::vector<Lit>>>();
    m.switch_vars = j.at("switch_vars").get<std::vector<Lit>>();
    return m;
}

} // namespace mdsat
