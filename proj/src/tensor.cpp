#include "rg/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rg {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Tensor with an ordered list of 2-dimensional legs. legs[i] names the bond
// occupied by index bit i (bit 0 = legs[0] = most significant position in
// the flat index? No: index = sum over i of bit_i << (n-1-i), legs[0] most
// significant). Values are dense, size 2^legs.
struct Node {
    std::vector<int> legs;
    std::vector<Complex> t;

    std::size_t size() const { return t.size(); }
};

Node make_node(std::vector<int> legs, std::vector<Complex> t) {
    Node n;
    n.legs = std::move(legs);
    n.t = std::move(t);
    return n;
}

std::vector<Complex> z_spider_values(std::size_t nlegs, const Phase& phase) {
    std::vector<Complex> t(std::size_t{1} << nlegs, Complex{0.0, 0.0});
    t.front() = Complex{1.0, 0.0};
    t.back() = std::polar(1.0, phase.radians());
    if (nlegs == 0) t.front() = Complex{1.0, 0.0} + std::polar(1.0, phase.radians());
    return t;
}

// Applies the 2x2 Hadamard to one leg of a dense tensor.
void conjugate_leg(std::vector<Complex>& t, std::size_t nlegs, std::size_t leg) {
    std::size_t stride = std::size_t{1} << (nlegs - 1 - leg);
    for (std::size_t base = 0; base < t.size(); ++base) {
        if (base & stride) continue;
        Complex a = t[base];
        Complex b = t[base | stride];
        t[base] = (a + b) * kInvSqrt2;
        t[base | stride] = (a - b) * kInvSqrt2;
    }
}

std::vector<Complex> vertex_values(const VertexKind& k, std::size_t nlegs) {
    switch (k.type) {
        case VertexType::Z:
            return z_spider_values(nlegs, k.phase);
        case VertexType::X: {
            auto t = z_spider_values(nlegs, k.phase);
            for (std::size_t i = 0; i < nlegs; ++i) conjugate_leg(t, nlegs, i);
            return t;
        }
        case VertexType::H: {
            if (nlegs != 2) throw InputError("Hadamard vertex must have exactly 2 legs");
            return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
        }
        case VertexType::B:
            return {1.0, 0.0, 0.0, 1.0};  // identity wire stub
    }
    throw InputError("unknown vertex type");
}

// Contracts duplicate bonds inside a single node (self-loops).
Node trace_internal(Node n) {
    for (;;) {
        int dup = -1;
        std::size_t p1 = 0, p2 = 0;
        for (std::size_t i = 0; i < n.legs.size() && dup < 0; ++i)
            for (std::size_t j = i + 1; j < n.legs.size(); ++j)
                if (n.legs[i] == n.legs[j]) {
                    dup = n.legs[i];
                    p1 = i;
                    p2 = j;
                    break;
                }
        if (dup < 0) return n;
        std::size_t nl = n.legs.size();
        std::vector<int> legs;
        for (std::size_t i = 0; i < nl; ++i)
            if (i != p1 && i != p2) legs.push_back(n.legs[i]);
        std::vector<Complex> t(std::size_t{1} << legs.size(), Complex{0.0, 0.0});
        for (std::size_t idx = 0; idx < n.t.size(); ++idx) {
            std::size_t b1 = (idx >> (nl - 1 - p1)) & 1;
            std::size_t b2 = (idx >> (nl - 1 - p2)) & 1;
            if (b1 != b2) continue;
            std::size_t out = 0, pos = 0;
            for (std::size_t i = 0; i < nl; ++i) {
                if (i == p1 || i == p2) continue;
                out = (out << 1) | ((idx >> (nl - 1 - i)) & 1);
                ++pos;
            }
            t[out] += n.t[idx];
        }
        n.legs = std::move(legs);
        n.t = std::move(t);
    }
}

Node contract_pair(const Node& a, const Node& b, std::size_t cap) {
    std::vector<int> shared;
    for (int l : a.legs)
        if (std::find(b.legs.begin(), b.legs.end(), l) != b.legs.end()) shared.push_back(l);
    std::vector<int> fa, fb;
    for (int l : a.legs)
        if (std::find(shared.begin(), shared.end(), l) == shared.end()) fa.push_back(l);
    for (int l : b.legs)
        if (std::find(shared.begin(), shared.end(), l) == shared.end()) fb.push_back(l);

    std::size_t nr = fa.size() + fb.size();
    if ((std::size_t{1} << nr) > cap)
        throw ResourceError("tensor contraction exceeds rank cap: intermediate needs " +
                            std::to_string(std::size_t{1} << nr) + " amplitudes");

    auto positions = [](const std::vector<int>& legs, const std::vector<int>& of) {
        std::vector<std::size_t> p;
        for (int l : of)
            p.push_back(static_cast<std::size_t>(
                std::find(legs.begin(), legs.end(), l) - legs.begin()));
        return p;
    };
    auto pa_free = positions(a.legs, fa);
    auto pa_shared = positions(a.legs, shared);
    auto pb_free = positions(b.legs, fb);
    auto pb_shared = positions(b.legs, shared);

    std::vector<Complex> t(std::size_t{1} << nr, Complex{0.0, 0.0});
    std::size_t na = a.legs.size(), nb = b.legs.size();
    std::size_t nfa = fa.size(), nfb = fb.size(), ns = shared.size();

    for (std::size_t ia = 0; ia < (std::size_t{1} << nfa); ++ia) {
        for (std::size_t ib = 0; ib < (std::size_t{1} << nfb); ++ib) {
            Complex acc{0.0, 0.0};
            for (std::size_t is = 0; is < (std::size_t{1} << ns); ++is) {
                std::size_t idxa = 0;
                for (std::size_t i = 0; i < nfa; ++i)
                    if (ia & (std::size_t{1} << (nfa - 1 - i))) idxa |= std::size_t{1} << (na - 1 - pa_free[i]);
                for (std::size_t i = 0; i < ns; ++i)
                    if (is & (std::size_t{1} << (ns - 1 - i))) idxa |= std::size_t{1} << (na - 1 - pa_shared[i]);
                std::size_t idxb = 0;
                for (std::size_t i = 0; i < nfb; ++i)
                    if (ib & (std::size_t{1} << (nfb - 1 - i))) idxb |= std::size_t{1} << (nb - 1 - pb_free[i]);
                for (std::size_t i = 0; i < ns; ++i)
                    if (is & (std::size_t{1} << (ns - 1 - i))) idxb |= std::size_t{1} << (nb - 1 - pb_shared[i]);
                acc += a.t[idxa] * b.t[idxb];
            }
            t[(ia << nfb) | ib] = acc;
        }
    }
    std::vector<int> legs = fa;
    legs.insert(legs.end(), fb.begin(), fb.end());
    return make_node(std::move(legs), std::move(t));
}

}  // namespace

TensorMap generator_tensor(const VertexKind& kind, std::size_t n_in, std::size_t n_out) {
    if (kind.is_boundary()) throw InputError("boundary has no generator tensor");
    if (kind.is_h() && !(n_in == 1 && n_out == 1))
        throw InputError("Hadamard generator requires 1->1 arity");
    std::size_t nlegs = n_in + n_out;
    auto vals = vertex_values(kind, nlegs);
    TensorMap t;
    t.n_inputs = n_in;
    t.n_outputs = n_out;
    t.entries.resize(std::size_t{1} << nlegs);
    for (std::size_t r = 0; r < (std::size_t{1} << n_out); ++r)
        for (std::size_t c = 0; c < (std::size_t{1} << n_in); ++c)
            t.entries[(r << n_in) | c] = vals[(r << n_in) | c];
    return t;
}

TensorMap evaluate(const Diagram& d, const EvalOptions& opts) {
    // Bond per edge instance; every vertex (boundaries included, as identity
    // stubs) becomes a node. Boundary nodes carry one extra open bond that is
    // never contracted; those survive as the result's wire ends.
    std::map<VertexId, std::vector<int>> legs_of;
    for (const auto& [v, k] : d.vertices()) legs_of[v];
    int bond = 0;
    for (const Edge& e : d.edges()) {
        legs_of[e.first].push_back(bond);
        legs_of[e.second].push_back(bond);
        ++bond;
    }
    std::map<VertexId, int> open_bond;
    for (VertexId v : d.inputs()) open_bond[v] = bond++;
    for (VertexId v : d.outputs()) open_bond[v] = bond++;

    std::vector<Node> nodes;
    for (const auto& [v, k] : d.vertices()) {
        std::vector<int> legs = legs_of[v];
        if (k.is_boundary()) legs.push_back(open_bond.at(v));
        if ((std::size_t{1} << legs.size()) > opts.rank_cap)
            throw ResourceError("vertex tensor exceeds rank cap: 2^" +
                                std::to_string(legs.size()) + " amplitudes");
        nodes.push_back(trace_internal(make_node(legs, vertex_values(k, legs.size()))));
    }

    while (nodes.size() > 1) {
        // greedy: smallest resulting tensor first, prefer pairs sharing bonds
        std::size_t bi = 0, bj = 1;
        std::size_t best = SIZE_MAX;
        bool best_shares = false;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                std::size_t sh = 0;
                for (int l : nodes[i].legs)
                    if (std::find(nodes[j].legs.begin(), nodes[j].legs.end(), l) !=
                        nodes[j].legs.end())
                        ++sh;
                std::size_t res = nodes[i].legs.size() + nodes[j].legs.size() - 2 * sh;
                bool shares = sh > 0;
                if (std::pair(!shares, res) < std::pair(!best_shares, best)) {
                    best = res;
                    best_shares = shares;
                    bi = i;
                    bj = j;
                }
            }
        }
        Node merged = contract_pair(nodes[bi], nodes[bj], opts.rank_cap);
        nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(bj));
        nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(bi));
        nodes.push_back(trace_internal(std::move(merged)));
    }

    TensorMap out;
    out.n_inputs = d.inputs().size();
    out.n_outputs = d.outputs().size();
    std::size_t total = out.n_inputs + out.n_outputs;
    out.entries.assign(std::size_t{1} << total, Complex{0.0, 0.0});

    Node final_node = nodes.empty() ? make_node({}, {Complex{1.0, 0.0}}) : std::move(nodes[0]);
    // result leg order: outputs then inputs, each list's first = MSB
    std::vector<int> want;
    for (VertexId v : d.outputs()) want.push_back(open_bond.at(v));
    for (VertexId v : d.inputs()) want.push_back(open_bond.at(v));
    std::vector<std::size_t> pos(want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        auto it = std::find(final_node.legs.begin(), final_node.legs.end(), want[i]);
        if (it == final_node.legs.end()) throw ResourceError("internal: open leg lost");
        pos[i] = static_cast<std::size_t>(it - final_node.legs.begin());
    }
    std::size_t nl = final_node.legs.size();
    for (std::size_t idx = 0; idx < out.entries.size(); ++idx) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < total; ++i)
            if (idx & (std::size_t{1} << (total - 1 - i))) src |= std::size_t{1} << (nl - 1 - pos[i]);
        out.entries[idx] = final_node.t[src];
    }
    return out;
}

ScalarEquivalence equiv_up_to_scalar(const TensorMap& a, const TensorMap& b, double tol) {
    if (a.n_inputs != b.n_inputs || a.n_outputs != b.n_outputs)
        throw InputError("tensor shape mismatch: " + std::to_string(a.n_outputs) + "x" +
                         std::to_string(a.n_inputs) + " vs " + std::to_string(b.n_outputs) + "x" +
                         std::to_string(b.n_inputs));
    ScalarEquivalence r;
    std::size_t bi = 0;
    double bmax = 0.0, amax = 0.0;
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
        double m = std::abs(b.entries[i]);
        if (m > bmax) {
            bmax = m;
            bi = i;
        }
        amax = std::max(amax, std::abs(a.entries[i]));
    }
    if (bmax == 0.0) {
        r.equivalent = amax <= tol;
        r.scalar = Complex{1.0, 0.0};
        r.max_residual = amax;
        return r;
    }
    if (amax == 0.0) {
        r.equivalent = bmax <= tol;  // b nonzero here, so false unless tiny
        r.scalar = Complex{0.0, 0.0};
        r.max_residual = bmax;
        return r;
    }
    r.scalar = a.entries[bi] / b.entries[bi];
    double res = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        res = std::max(res, std::abs(a.entries[i] - r.scalar * b.entries[i]));
    r.max_residual = res;
    r.equivalent = res <= tol;
    return r;
}

}  // namespace rg
