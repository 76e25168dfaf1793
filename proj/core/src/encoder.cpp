#include "mdsat/encoder.hpp"

#include <array>
#include <stdexcept>

namespace mdsat {
namespace {

constexpr std::uint32_t kIv[4] = {0x67452301u, 0xefcdab89u, 0x98badcfeu,
                                  0x10325476u};
constexpr int kSchedule[48] = {
    0, 1, 2, 3,  4, 5, 6,  7,  8, 9, 10, 11, 12, 13, 14, 15,
    0, 4, 8, 12, 1, 5, 9,  13, 2, 6, 10, 14, 3,  7,  11, 15,
    0, 8, 4, 12, 2, 10, 6, 14, 1, 9, 5,  13, 3,  11, 7,  15,
};
constexpr int kRot[3][4] = {{3, 7, 11, 19}, {3, 5, 9, 13}, {3, 9, 11, 15}};
constexpr std::uint32_t kRoundConst[3] = {0u, 0x5a827999u, 0x6ed9eba1u};

// A circuit wire: either a constant or a (possibly negated) CNF variable.
// Encoding: +1/-1 for true/false, 2*lit for a symbolic literal. Negation is
// sign flip in both cases.
class Bit {
public:
    Bit() : code_(-1) {} // false
    static Bit constant(bool v) { return Bit(v ? 1 : -1); }
    static Bit from_lit(Lit l) { return Bit(2 * l); }

    bool is_const() const { return code_ == 1 || code_ == -1; }
    bool const_value() const { return code_ == 1; }
    Lit lit() const { return static_cast<Lit>(code_ / 2); }
    Bit operator~() const { return Bit(-code_); }
    bool operator==(const Bit&) const = default;

private:
    explicit Bit(std::int64_t code) : code_(code) {}
    std::int64_t code_;
};

using Word = std::array<Bit, 32>;

class CircuitBuilder {
public:
    Cnf cnf;

    Bit fresh() { return Bit::from_lit(cnf.new_var()); }

    void clause(std::initializer_list<Lit> lits) { cnf.add_clause(Clause(lits)); }

    Bit bxor(Bit a, Bit b) {
        if (a.is_const()) return a.const_value() ? ~b : b;
        if (b.is_const()) return b.const_value() ? ~a : a;
        if (a == b) return Bit::constant(false);
        if (a == ~b) return Bit::constant(true);
        Bit s = fresh();
        Lit x = a.lit(), y = b.lit(), z = s.lit();
        clause({-x, -y, -z});
        clause({x, y, -z});
        clause({-x, y, z});
        clause({x, -y, z});
        return s;
    }

    Bit band(Bit a, Bit b) {
        if (a.is_const()) return a.const_value() ? b : Bit::constant(false);
        if (b.is_const()) return b.const_value() ? a : Bit::constant(false);
        if (a == b) return a;
        if (a == ~b) return Bit::constant(false);
        Bit g = fresh();
        Lit x = a.lit(), y = b.lit(), z = g.lit();
        clause({-z, x});
        clause({-z, y});
        clause({-x, -y, z});
        return g;
    }

    Bit bor(Bit a, Bit b) { return ~band(~a, ~b); }

    Bit maj(Bit a, Bit b, Bit c) {
        if (a.is_const()) return a.const_value() ? bor(b, c) : band(b, c);
        if (b.is_const()) return b.const_value() ? bor(a, c) : band(a, c);
        if (c.is_const()) return c.const_value() ? bor(a, b) : band(a, b);
        if (a == b || a == c) return a;
        if (b == c) return b;
        if (a == ~b) return c;
        if (a == ~c) return b;
        if (b == ~c) return a;
        Bit g = fresh();
        Lit x = a.lit(), y = b.lit(), z = c.lit(), w = g.lit();
        clause({-x, -y, w});
        clause({x, y, -w});
        clause({-x, -z, w});
        clause({x, z, -w});
        clause({-y, -z, w});
        clause({y, z, -w});
        return g;
    }

    // x ? y : z
    Bit choice(Bit x, Bit y, Bit z) {
        if (x.is_const()) return x.const_value() ? y : z;
        if (y == z) return y;
        if (y == ~z) return bxor(x, z);
        if (y.is_const()) return y.const_value() ? bor(x, z) : band(~x, z);
        if (z.is_const()) return z.const_value() ? bor(~x, y) : band(x, y);
        if (y == x) return bor(x, z);
        if (y == ~x) return band(~x, z);
        if (z == x) return band(x, y);
        if (z == ~x) return bor(~x, y);
        Bit f = fresh();
        Lit s = x.lit(), t = y.lit(), e = z.lit(), w = f.lit();
        clause({-s, -t, w});
        clause({-s, t, -w});
        clause({s, -e, w});
        clause({s, e, -w});
        clause({-t, -e, w});
        clause({t, e, -w});
        return f;
    }

    Word add(const Word& a, const Word& b) {
        Word out{};
        Bit carry = Bit::constant(false);
        for (int i = 0; i < 32; ++i) {
            out[i] = bxor(bxor(a[i], b[i]), carry);
            if (i < 31) carry = maj(a[i], b[i], carry);
        }
        return out;
    }

    static Word const_word(std::uint32_t v) {
        Word w{};
        for (int i = 0; i < 32; ++i) w[i] = Bit::constant((v >> i) & 1u);
        return w;
    }

    static Word rotl(const Word& w, int s) {
        Word out = w;
        for (int i = 0; i < 32; ++i) out[(i + s) % 32] = w[i];
        return out;
    }
};

} // namespace

TemplateCnf encode_template(int k, DigestMode mode) {
    if (k < 5 || k > kMd4FullSteps)
        throw std::invalid_argument("step count k must be in [5,48]");

    TemplateCnf tmpl;
    tmpl.k = k;
    tmpl.digest_mode = mode;
    CircuitBuilder b;

    // Message words first: variables 1..512.
    std::array<Word, 16> msg{};
    for (int w = 0; w < 16; ++w) {
        for (int i = 0; i < 32; ++i) msg[w][i] = Bit::from_lit(b.cnf.new_var());
    }
    tmpl.vars.input_vars.resize(512);
    for (int i = 0; i < 512; ++i) tmpl.vars.input_vars[i] = i + 1;

    std::array<Word, 4> regs = {
        CircuitBuilder::const_word(kIv[0]), CircuitBuilder::const_word(kIv[1]),
        CircuitBuilder::const_word(kIv[2]), CircuitBuilder::const_word(kIv[3])};

    // Tracks variables already published as a chaining bit (or that belong to
    // the input block); those get a fresh alias instead of being reused.
    std::vector<bool> claimed;
    auto publish = [&](Bit bit) -> Lit {
        if (!bit.is_const()) {
            Lit l = bit.lit();
            if (l > 512) {
                if (static_cast<std::size_t>(l) >= claimed.size())
                    claimed.resize(l + 1, false);
                if (l > 0 && !claimed[l]) {
                    claimed[l] = true;
                    return l;
                }
            }
        }
        Lit v = b.cnf.new_var();
        if (static_cast<std::size_t>(v) >= claimed.size())
            claimed.resize(v + 1, false);
        claimed[v] = true;
        if (bit.is_const()) {
            b.clause({bit.const_value() ? v : -v});
        } else {
            b.clause({-v, bit.lit()});
            b.clause({v, -bit.lit()});
        }
        return v;
    };

    tmpl.vars.chaining_vars.resize(k);
    for (int step = 0; step < k; ++step) {
        int round = step / 16;
        int tgt = (4 - step % 4) % 4;
        const Word& x = regs[(tgt + 1) % 4];
        const Word& y = regs[(tgt + 2) % 4];
        const Word& z = regs[(tgt + 3) % 4];

        Word mix{};
        for (int i = 0; i < 32; ++i) {
            mix[i] = round == 0   ? b.choice(x[i], y[i], z[i])
                     : round == 1 ? b.maj(x[i], y[i], z[i])
                                  : b.bxor(b.bxor(x[i], y[i]), z[i]);
        }

        Word sum = b.add(regs[tgt], mix);
        if (kRoundConst[round] != 0)
            sum = b.add(sum, CircuitBuilder::const_word(kRoundConst[round]));
        sum = b.add(sum, msg[kSchedule[step]]);

        Word rotated = CircuitBuilder::rotl(sum, kRot[round][step % 4]);
        tmpl.vars.chaining_vars[step].resize(32);
        for (int i = 0; i < 32; ++i) {
            Lit v = publish(rotated[i]);
            tmpl.vars.chaining_vars[step][i] = v;
            rotated[i] = Bit::from_lit(v);
        }
        regs[tgt] = rotated;
    }

    // Digest word = register + IV (feedforward) or the register itself.
    std::array<Word, 4> digest{};
    for (int i = 0; i < 4; ++i)
        digest[i] = mode == DigestMode::Feedforward
                        ? b.add(regs[i], CircuitBuilder::const_word(kIv[i]))
                        : regs[i];

    // Output variables occupy the highest indices.
    tmpl.vars.output_vars.resize(128);
    for (int w = 0; w < 4; ++w) {
        for (int i = 0; i < 32; ++i) {
            Lit v = b.cnf.new_var();
            Bit bit = digest[w][i];
            if (bit.is_const()) {
                b.clause({bit.const_value() ? v : -v});
            } else {
                b.clause({-v, bit.lit()});
                b.clause({v, -bit.lit()});
            }
            tmpl.vars.output_vars[32 * w + i] = v;
        }
    }

    tmpl.cnf = std::move(b.cnf);
    return tmpl;
}

TemplateCnf substitute_hash(TemplateCnf tmpl, const Digest& chi) {
    if (tmpl.vars.output_vars.size() != 128)
        throw std::invalid_argument("template lacks output variables");
    for (int i = 0; i < 128; ++i) {
        Lit v = tmpl.vars.output_vars[i];
        tmpl.cnf.add_clause({chi.bit(i) ? v : -v});
    }
    return tmpl;
}

} // namespace mdsat
