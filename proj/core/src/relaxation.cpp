#include "mdsat/relaxation.hpp"

#include <stdexcept>

namespace mdsat {

SwitchVector SwitchVector::parse(const std::string& text, int expected_q) {
    if (text.empty()) throw std::invalid_argument("empty switch vector");
    if (expected_q >= 0 && static_cast<int>(text.size()) != expected_q)
        throw std::invalid_argument("switch vector has wrong length");
    SwitchVector v;
    v.bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("switch vector must be over {0,1}");
        v.bits.push_back(c == '1');
    }
    return v;
}

std::string SwitchVector::str() const {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

int SwitchVector::popcount() const {
    int n = 0;
    for (bool b : bits) n += b;
    return n;
}

std::vector<int> SwitchVector::active_steps() const {
    std::vector<int> steps;
    for (int p = 0; p < q(); ++p)
        if (bits[p]) steps.push_back(p + 5);
    return steps;
}

ConstraintFamily install_constraint_family(TemplateCnf& tmpl,
                                           std::uint32_t constant) {
    if (tmpl.k < 9)
        throw std::invalid_argument("constraint family needs k >= 9");
    if (!tmpl.vars.switch_vars.empty())
        throw std::invalid_argument("switch variables already installed");

    ConstraintFamily family;
    family.constant = constant;
    int q = tmpl.k - 8;
    for (int j = 1; j <= q; ++j) {
        RelaxationConstraint rc;
        rc.index = j;
        rc.step = j + 4;
        const std::vector<Lit>& chain = tmpl.vars.chaining_vars[rc.step - 1];
        rc.literals.reserve(32);
        for (int i = 0; i < 32; ++i) {
            bool bit = (constant >> i) & 1u;
            rc.literals.push_back(bit ? chain[i] : -chain[i]);
        }
        rc.switch_var = tmpl.cnf.new_var();
        tmpl.vars.switch_vars.push_back(rc.switch_var);
        for (Lit l : rc.literals) tmpl.cnf.add_clause({-rc.switch_var, l});
        family.constraints.push_back(std::move(rc));
    }
    return family;
}

std::vector<Lit> lambda_to_assumptions(const SwitchVector& lambda,
                                       const VariableMap& vars) {
    if (lambda.q() != static_cast<int>(vars.switch_vars.size()))
        throw std::invalid_argument("switch vector length differs from Q");
    std::vector<Lit> assumptions;
    assumptions.reserve(lambda.q());
    for (int j = 0; j < lambda.q(); ++j) {
        Lit s = vars.switch_vars[j];
        assumptions.push_back(lambda.bits[j] ? s : -s);
    }
    return assumptions;
}

} // namespace mdsat
