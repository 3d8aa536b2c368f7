#pragma once

// Permutation groups on {0, .., d-1} for small d, stored as explicit sorted
// element lists. Everything downstream (characters, immanants) assumes the
// element order is deterministic, so elements are kept in lexicographic
// order with the identity first.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "dpt/errors.hpp"

namespace dpt {

using Perm = std::vector<int>; // images: p[i] is where i goes

inline Perm perm_identity(int d) {
    Perm p(static_cast<std::size_t>(d));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// (a o b)(i) = a[b[i]]
inline Perm perm_compose(const Perm& a, const Perm& b) {
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[static_cast<std::size_t>(b[i])];
    return c;
}

inline Perm perm_inverse(const Perm& a) {
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
    return c;
}

// Transposition (i j) as an element of S_d.
inline Perm perm_transposition(int d, int i, int j) {
    Perm p = perm_identity(d);
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    return p;
}

// Cycle lengths sorted descending, e.g. (2,2) for a double transposition.
inline std::vector<int> cycle_type(const Perm& p) {
    std::vector<bool> seen(p.size(), false);
    std::vector<int> cycles;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<std::size_t>(p[j]);
            ++len;
        }
        cycles.push_back(len);
    }
    std::sort(cycles.rbegin(), cycles.rend());
    return cycles;
}

inline int perm_order(const Perm& p) {
    int ord = 1;
    for (int len : cycle_type(p)) ord = std::lcm(ord, len);
    return ord;
}

class PermGroup {
public:
    PermGroup() = default;

    static PermGroup from_elements(int degree, std::vector<Perm> elements) {
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        PermGroup g;
        g.degree_ = degree;
        g.elements_ = std::move(elements);
        return g;
    }

    // Closure of the generators under composition; always contains the identity.
    static PermGroup closure(int degree, const std::vector<Perm>& gens) {
        std::set<Perm> elems;
        elems.insert(perm_identity(degree));
        for (const Perm& g : gens) elems.insert(g);
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<Perm> snapshot(elems.begin(), elems.end());
            for (const Perm& a : snapshot)
                for (const Perm& b : snapshot)
                    if (elems.insert(perm_compose(a, b)).second) grew = true;
        }
        return from_elements(degree, std::vector<Perm>(elems.begin(), elems.end()));
    }

    static PermGroup symmetric(int degree) {
        std::vector<Perm> gens;
        if (degree >= 2) {
            gens.push_back(perm_transposition(degree, 0, 1));
            Perm cyc(static_cast<std::size_t>(degree));
            for (int i = 0; i < degree; ++i) cyc[static_cast<std::size_t>(i)] = (i + 1) % degree;
            gens.push_back(cyc);
        }
        return closure(degree, gens);
    }

    static PermGroup trivial(int degree) { return closure(degree, {}); }

    int degree() const { return degree_; }
    int order() const { return static_cast<int>(elements_.size()); }
    const std::vector<Perm>& elements() const { return elements_; }
    const Perm& element(int i) const { return elements_[static_cast<std::size_t>(i)]; }

    bool contains(const Perm& p) const {
        return std::binary_search(elements_.begin(), elements_.end(), p);
    }

    int index_of(const Perm& p) const {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
        if (it == elements_.end() || *it != p) throw DimensionError("element not in group");
        return static_cast<int>(it - elements_.begin());
    }

    // Conjugacy classes as element-index lists, ordered by smallest member;
    // the identity's singleton class comes first.
    std::vector<std::vector<int>> conjugacy_classes() const {
        const int n = order();
        std::vector<int> cls(static_cast<std::size_t>(n), -1);
        std::vector<std::vector<int>> classes;
        for (int i = 0; i < n; ++i) {
            if (cls[static_cast<std::size_t>(i)] >= 0) continue;
            int id = static_cast<int>(classes.size());
            std::vector<int> members;
            for (int s = 0; s < n; ++s) {
                Perm conj = perm_compose(perm_compose(element(s), element(i)), perm_inverse(element(s)));
                int idx = index_of(conj);
                if (cls[static_cast<std::size_t>(idx)] < 0) {
                    cls[static_cast<std::size_t>(idx)] = id;
                    members.push_back(idx);
                }
            }
            std::sort(members.begin(), members.end());
            classes.push_back(std::move(members));
        }
        return classes;
    }

    std::vector<int> class_index_of_elements() const {
        std::vector<std::vector<int>> classes = conjugacy_classes();
        std::vector<int> cls(static_cast<std::size_t>(order()), -1);
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (int idx : classes[c]) cls[static_cast<std::size_t>(idx)] = static_cast<int>(c);
        return cls;
    }

    // Short structural label; covers every subgroup shape that occurs for
    // degree <= 4 and falls back to G<order>.
    std::string structure_name() const {
        const int n = order();
        auto has_cycle_type = [&](std::initializer_list<int> t) {
            std::vector<int> want(t);
            for (const Perm& p : elements_) {
                std::vector<int> ct = cycle_type(p);
                ct.erase(std::remove(ct.begin(), ct.end(), 1), ct.end());
                if (ct == want) return true;
            }
            return false;
        };
        switch (n) {
            case 1: return "C1";
            case 2: return has_cycle_type({2}) ? "C2" : "C2'";
            case 3: return "C3";
            case 4: {
                bool cyclic = false;
                for (const Perm& p : elements_) cyclic = cyclic || perm_order(p) == 4;
                if (cyclic) return "C4";
                return has_cycle_type({2}) ? "C2xC2" : "V4";
            }
            case 6: return "S3";
            case 8: return "D4";
            case 12: return "A4";
            case 24: return "S4";
            default: return "G" + std::to_string(n);
        }
    }

    bool operator==(const PermGroup& o) const { return degree_ == o.degree_ && elements_ == o.elements_; }

private:
    int degree_ = 0;
    std::vector<Perm> elements_;
};

// Every subgroup of S_d, found by closing one added generator at a time
// starting from the trivial group.
inline std::vector<PermGroup> all_subgroups(int d) {
    PermGroup full = PermGroup::symmetric(d);
    std::set<std::vector<Perm>> seen;
    std::vector<PermGroup> out;
    std::vector<PermGroup> queue{PermGroup::trivial(d)};
    seen.insert(queue.front().elements());
    while (!queue.empty()) {
        PermGroup h = queue.back();
        queue.pop_back();
        out.push_back(h);
        for (const Perm& g : full.elements()) {
            if (h.contains(g)) continue;
            std::vector<Perm> gens = h.elements();
            gens.push_back(g);
            PermGroup k = PermGroup::closure(d, gens);
            if (seen.insert(k.elements()).second) queue.push_back(k);
        }
    }
    std::sort(out.begin(), out.end(), [](const PermGroup& a, const PermGroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elements() < b.elements();
    });
    return out;
}

// Representatives of subgroup conjugacy classes in S_d, each given by the
// lexicographically smallest conjugate element list; sorted by order.
inline std::vector<PermGroup> enumerate_subgroups(int d) {
    PermGroup full = PermGroup::symmetric(d);
    std::set<std::vector<Perm>> canon;
    for (const PermGroup& h : all_subgroups(d)) {
        std::vector<Perm> best;
        for (const Perm& s : full.elements()) {
            Perm sinv = perm_inverse(s);
            std::vector<Perm> conj;
            conj.reserve(h.elements().size());
            for (const Perm& e : h.elements()) conj.push_back(perm_compose(perm_compose(s, e), sinv));
            std::sort(conj.begin(), conj.end());
            if (best.empty() || conj < best) best = std::move(conj);
        }
        canon.insert(best);
    }
    std::vector<PermGroup> out;
    for (const std::vector<Perm>& els : canon) out.push_back(PermGroup::from_elements(d, els));
    std::sort(out.begin(), out.end(), [](const PermGroup& a, const PermGroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elements() < b.elements();
    });
    return out;
}

} // namespace dpt
