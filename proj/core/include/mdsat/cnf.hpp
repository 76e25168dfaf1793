#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mdsat {

// Literals use the DIMACS convention: nonzero signed ints, |lit| is the
// variable index (1-based), negative means negated.
using Lit = std::int32_t;
using Clause = std::vector<Lit>;

struct Cnf {
    int num_vars = 0;
    std::vector<Clause> clauses;

    int new_var() { return ++num_vars; }
    void add_clause(Clause c);

    std::string to_dimacs() const;
    static Cnf from_dimacs(std::istream& in);
};

// Names the variable groups of a template CNF.
struct VariableMap {
    std::vector<Lit> input_vars;               // 512 ids, X^in
    std::vector<Lit> output_vars;              // 128 digest bit ids
    std::vector<std::vector<Lit>> chaining_vars; // [step-1] -> 32 ids
    std::vector<Lit> switch_vars;              // Q ids, empty until gated

    std::string to_json() const;
    static VariableMap from_json(const std::string& text);
};

// How the 128 output variables relate to the step-k registers.
enum class DigestMode {
    Feedforward, // output word = register + IV (matches md4_k)
    Registers,   // output word = raw register (matches md4_k_registers)
};

// Template CNF for the k-step circuit plus its variable map.
struct TemplateCnf {
    Cnf cnf;
    int k = 0;
    DigestMode digest_mode = DigestMode::Feedforward;
    VariableMap vars;
};

} // namespace mdsat
