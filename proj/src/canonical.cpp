#include "rg/canonical.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rg {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

// Component-local view with index-based adjacency.
struct Component {
    std::vector<VertexId> verts;              // local index -> vertex id
    std::vector<std::vector<int>> adj;        // with multiplicity; loops twice
    std::vector<std::string> init_key;        // kind/phase/boundary-position key
    std::vector<VertexId> loop_count_unused;
};

std::string vertex_key(const Diagram& d, VertexId v) {
    const VertexKind& k = d.kind(v);
    std::ostringstream os;
    os << vertex_type_char(k.type);
    if (k.is_spider()) os << k.phase.num() << '/' << k.phase.den();
    if (k.is_boundary()) {
        for (std::size_t i = 0; i < d.inputs().size(); ++i)
            if (d.inputs()[i] == v) os << "i" << i;
        for (std::size_t i = 0; i < d.outputs().size(); ++i)
            if (d.outputs()[i] == v) os << "o" << i;
    }
    return os.str();
}

// One round of colour refinement; returns true if the partition changed.
bool refine_once(const Component& c, std::vector<int>& colour) {
    int n = static_cast<int>(c.verts.size());
    std::vector<std::pair<std::vector<int>, int>> sigs(n);
    for (int v = 0; v < n; ++v) {
        std::vector<int> s;
        s.push_back(colour[v]);
        std::vector<int> ns;
        ns.reserve(c.adj[v].size());
        for (int u : c.adj[v]) ns.push_back(colour[u]);
        std::sort(ns.begin(), ns.end());
        s.insert(s.end(), ns.begin(), ns.end());
        sigs[v] = {std::move(s), v};
    }
    auto sorted = sigs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> next(n);
    int rank = -1;
    const std::vector<int>* prev = nullptr;
    for (auto& [s, v] : sorted) {
        if (!prev || s != *prev) {
            ++rank;
            prev = &s;
        }
        next[v] = rank;
    }
    bool changed = next != colour;
    colour = std::move(next);
    return changed;
}

void refine(const Component& c, std::vector<int>& colour) {
    while (refine_once(c, colour)) {
    }
}

bool discrete(const std::vector<int>& colour) {
    std::set<int> s(colour.begin(), colour.end());
    return s.size() == colour.size();
}

// Certificate of the component under a discrete colouring. Labels are the
// colour ranks. Lists vertex keys in label order plus relabeled edges.
std::string component_certificate(const Component& c, const std::vector<int>& colour) {
    int n = static_cast<int>(c.verts.size());
    std::vector<int> vert_of_label(n);
    for (int v = 0; v < n; ++v) vert_of_label[colour[v]] = v;
    std::ostringstream os;
    os << "V[";
    for (int l = 0; l < n; ++l) os << c.init_key[vert_of_label[l]] << ';';
    os << "]E[";
    std::vector<std::pair<int, int>> es;
    for (int v = 0; v < n; ++v) {
        for (int u : c.adj[v]) {
            if (v == u) continue;  // handled below, adj lists loops twice
            int a = colour[v], b = colour[u];
            if (a <= b) es.push_back({a, b});
        }
    }
    for (int v = 0; v < n; ++v) {
        int loops = 0;
        for (int u : c.adj[v])
            if (u == v) ++loops;
        for (int i = 0; i < loops / 2; ++i) es.push_back({colour[v], colour[v]});
    }
    std::sort(es.begin(), es.end());
    for (auto& [a, b] : es) os << a << ',' << b << ';';
    os << ']';
    return os.str();
}

// u and v are interchangeable by the automorphism that swaps just them:
// identical incidence once occurrences of each other and of themselves are
// normalized away.
bool twins(const Component& c, int u, int v) {
    auto key = [&c](int a, int b) {
        std::vector<int> k;
        k.reserve(c.adj[static_cast<std::size_t>(a)].size());
        for (int x : c.adj[static_cast<std::size_t>(a)])
            k.push_back(x == a ? -1 : x == b ? -2 : x);
        std::sort(k.begin(), k.end());
        return k;
    };
    return c.init_key[static_cast<std::size_t>(u)] == c.init_key[static_cast<std::size_t>(v)] &&
           key(u, v) == key(v, u);
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
};

// Individualization–refinement with two prunes: mutual-twin cells split in
// one shot, and branches whose pivot lies in the orbit of an already-tried
// pivot (under automorphisms discovered from equal certificates that fix the
// current individualization path) are skipped.
struct SearchCtx {
    const Component& c;
    std::string best_cert;
    std::vector<int> best_colour;
    bool best_set = false;
    std::vector<std::vector<int>> automorphisms;
    std::vector<int> path;
    std::size_t leaves = 0;
};

void search(SearchCtx& ctx, std::vector<int> colour, int depth) {
    const Component& c = ctx.c;
    refine(c, colour);
    if (discrete(colour)) {
        if (++ctx.leaves > 100000)
            throw ResourceError("canonical labeling search exceeded its leaf budget");
        std::string cert = component_certificate(c, colour);
        if (!ctx.best_set || cert < ctx.best_cert) {
            ctx.best_cert = std::move(cert);
            ctx.best_colour = std::move(colour);
            ctx.best_set = true;
        } else if (cert == ctx.best_cert && ctx.automorphisms.size() < 64) {
            int n = static_cast<int>(c.verts.size());
            std::vector<int> inv_best(n), perm(n);
            for (int v = 0; v < n; ++v)
                inv_best[static_cast<std::size_t>(ctx.best_colour[static_cast<std::size_t>(v)])] = v;
            bool nontrivial = false;
            for (int v = 0; v < n; ++v) {
                perm[static_cast<std::size_t>(v)] =
                    inv_best[static_cast<std::size_t>(colour[static_cast<std::size_t>(v)])];
                nontrivial |= perm[static_cast<std::size_t>(v)] != v;
            }
            if (nontrivial) ctx.automorphisms.push_back(std::move(perm));
        }
        return;
    }
    if (depth > 512) throw ResourceError("canonical labeling exceeded individualization depth");
    int n = static_cast<int>(c.verts.size());
    std::vector<int> count(n, 0);
    for (int col : colour) ++count[col];
    int target = -1;
    for (int v = 0; v < n; ++v) {
        if (count[colour[v]] > 1 && (target == -1 || colour[v] < colour[target])) target = v;
    }
    int tcol = colour[target];
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
        if (colour[v] == tcol) members.push_back(v);

    // cells of mutual twins admit an arbitrary discrete split: every choice
    // is an automorphic image of every other
    bool all_twins = true;
    for (std::size_t i = 0; i + 1 < members.size() && all_twins; ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (!twins(c, members[i], members[j])) {
                all_twins = false;
                break;
            }
    if (all_twins) {
        std::vector<int> next = std::move(colour);
        int fresh = n;
        for (int v : members) next[v] = fresh++;
        search(ctx, std::move(next), depth + 1);
        return;
    }

    std::vector<int> tried;
    for (std::size_t mi = 0; mi < members.size(); ++mi) {
        int v = members[mi];
        // orbit prune against automorphisms that fix the path pointwise;
        // recomputed each round because leaves below add generators
        UnionFind uf(n);
        for (const auto& g : ctx.automorphisms) {
            bool fixes = true;
            for (int w : ctx.path)
                if (g[static_cast<std::size_t>(w)] != w) {
                    fixes = false;
                    break;
                }
            if (!fixes) continue;
            for (int x = 0; x < n; ++x) uf.unite(x, g[static_cast<std::size_t>(x)]);
        }
        bool dup = false;
        for (int t : tried) {
            if (uf.find(t) == uf.find(v) || twins(c, t, v)) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        tried.push_back(v);
        std::vector<int> next = colour;
        next[static_cast<std::size_t>(v)] = n;  // fresh colour, refined away immediately
        ctx.path.push_back(v);
        search(ctx, std::move(next), depth + 1);
        ctx.path.pop_back();
    }
}

struct ComponentResult {
    std::string cert;
    std::vector<VertexId> order;  // label -> vertex id
};

ComponentResult canonicalize_component(const Diagram& d, const std::vector<VertexId>& verts) {
    Component c;
    c.verts = verts;
    std::map<VertexId, int> local;
    for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
    c.adj.resize(verts.size());
    c.init_key.resize(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        for (VertexId u : d.neighbors(verts[i])) c.adj[i].push_back(local.at(u));
        c.init_key[i] = vertex_key(d, verts[i]);
    }

    // initial colours by key rank
    std::vector<std::string> keys = c.init_key;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<int> colour(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
        colour[i] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), c.init_key[i]) -
                                     keys.begin());

    SearchCtx ctx{c, {}, {}, false, {}, {}, 0};
    search(ctx, std::move(colour), 0);

    ComponentResult r;
    r.cert = ctx.best_cert;
    r.order.resize(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
        r.order[static_cast<std::size_t>(ctx.best_colour[i])] = verts[i];
    return r;
}

}  // namespace

CanonicalForm canonical_form(const Diagram& d) {
    // connected components, then canonicalize each and order by certificate
    std::map<VertexId, int> comp;
    int ncomp = 0;
    for (const auto& [v, k] : d.vertices()) {
        if (comp.count(v)) continue;
        std::vector<VertexId> stack{v};
        comp[v] = ncomp;
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            for (VertexId u : d.neighbors(x)) {
                if (!comp.count(u)) {
                    comp[u] = ncomp;
                    stack.push_back(u);
                }
            }
        }
        ++ncomp;
    }
    std::vector<std::vector<VertexId>> members(ncomp);
    for (const auto& [v, c] : comp) members[c].push_back(v);

    std::vector<ComponentResult> results;
    results.reserve(members.size());
    for (const auto& m : members) results.push_back(canonicalize_component(d, m));
    std::sort(results.begin(), results.end(),
              [](const ComponentResult& a, const ComponentResult& b) { return a.cert < b.cert; });

    CanonicalForm f;
    for (const auto& r : results)
        for (VertexId v : r.order) {
            f.label[v] = f.order.size();
            f.order.push_back(v);
        }

    // global certificate under the global labeling
    std::ostringstream os;
    os << "V[";
    for (VertexId v : f.order) os << vertex_key(d, v) << ';';
    os << "]E[";
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (const Edge& e : d.edges()) {
        std::size_t a = f.label.at(e.first), b = f.label.at(e.second);
        if (a > b) std::swap(a, b);
        es.push_back({a, b});
    }
    std::sort(es.begin(), es.end());
    for (auto& [a, b] : es) os << a << ',' << b << ';';
    os << "]I[";
    for (VertexId v : d.inputs()) os << f.label.at(v) << ';';
    os << "]O[";
    for (VertexId v : d.outputs()) os << f.label.at(v) << ';';
    os << ']';
    f.certificate = os.str();
    return f;
}

std::uint64_t canonical_hash(const Diagram& d) { return fnv1a64(canonical_form(d).certificate); }

std::string canonical_hash_hex(const Diagram& d) {
    std::uint64_t h = canonical_hash(d);
    static const char* hex = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return s;
}

IsoResult isomorphic(const Diagram& a, const Diagram& b) {
    IsoResult r;
    CanonicalForm fa = canonical_form(a);
    CanonicalForm fb = canonical_form(b);
    if (fa.certificate != fb.certificate) return r;
    r.isomorphic = true;
    for (std::size_t l = 0; l < fa.order.size(); ++l) r.witness[fa.order[l]] = fb.order[l];
    return r;
}

}  // namespace rg
