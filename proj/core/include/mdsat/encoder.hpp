#pragma once

#include "mdsat/cnf.hpp"
#include "mdsat/md4.hpp"

namespace mdsat {

// Builds the template CNF for the k-step circuit by gate-level translation:
// 32-bit additions as per-bit full adders with carry chains, round functions
// as per-bit choice/majority/xor gates, rotations as wire renumbering.
// Input variables are 1..512; outputs occupy the highest indices.
// `mode` selects whether the output variables carry the feedforward digest
// (register + IV, the md4_k value) or the raw step-k registers.
// Throws std::invalid_argument unless 5 <= k <= 48.
TemplateCnf encode_template(int k, DigestMode mode = DigestMode::Feedforward);

// Appends 128 unit clauses pinning the output variables to chi.
TemplateCnf substitute_hash(TemplateCnf tmpl, const Digest& chi);

} // namespace mdsat
