#include "dispersym/modderiv.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace dispersym {

namespace {

struct GroupKey {
    // (kind, name) -> multiplicity, derivative indices ignored
    std::map<std::pair<int, std::string>, int> names;
    int weight = 0;
    bool operator<(const GroupKey& o) const {
        if (weight != o.weight) return weight < o.weight;
        return names < o.names;
    }
};

GroupKey group_of(const Monomial& m) {
    GroupKey g;
    for (const auto& [a, p] : m.factors()) {
        g.names[{int(a.kind), a.name}] += p;
        g.weight += a.deriv * p;
    }
    return g;
}

// All monomials with the given name multiset and total derivative weight.
void enumerate_monomials(const std::vector<std::pair<int, std::string>>& slots, std::size_t idx,
                         int weight_left, std::vector<std::pair<Atom, int>>& acc,
                         std::set<Monomial>& out) {
    if (idx == slots.size()) {
        if (weight_left == 0) out.insert(Monomial::from_powers(acc));
        return;
    }
    bool differentiable = slots[idx].first != int(AtomKind::formal_param);
    int maxw = differentiable ? weight_left : 0;
    for (int b = 0; b <= maxw; ++b) {
        Atom a{AtomKind(slots[idx].first), slots[idx].second, b};
        acc.push_back({a, 1});
        enumerate_monomials(slots, idx + 1, weight_left - b, acc, out);
        acc.pop_back();
    }
}

// Row-echelon reduction of `target` against the span of `basis`, using the
// canonical monomial order for pivots.
Polynomial reduce_against(Polynomial target, std::vector<Polynomial> basis) {
    std::vector<std::pair<Monomial, Polynomial>> echelon;  // (pivot, row)
    auto leading = [](const Polynomial& p) { return std::prev(p.terms().end())->first; };
    auto coeff_of = [](const Polynomial& p, const Monomial& m) {
        auto it = p.terms().find(m);
        return it == p.terms().end() ? GaussianRational() : it->second;
    };
    for (auto& row : basis) {
        for (const auto& [pivot, erow] : echelon) {
            if (row.is_zero()) break;
            GaussianRational c = coeff_of(row, pivot);
            if (!c.is_zero()) row -= erow.scale(c);
        }
        if (row.is_zero()) continue;
        Monomial pivot = leading(row);
        GaussianRational lc = row.terms().rbegin()->second;
        echelon.push_back({pivot, row.scale(GaussianRational(1) / lc)});
        std::sort(echelon.begin(), echelon.end(),
                  [](const auto& x, const auto& y) { return y.first < x.first; });
    }
    bool changed = true;
    while (changed && !target.is_zero()) {
        changed = false;
        for (const auto& [pivot, erow] : echelon) {
            GaussianRational c = coeff_of(target, pivot);
            if (!c.is_zero()) {
                target -= erow.scale(c);
                changed = true;
            }
        }
    }
    return target;
}

}  // namespace

Polynomial mod_derivatives(const Polynomial& p) {
    std::map<GroupKey, Polynomial> groups;
    for (const auto& [m, c] : p.terms()) {
        Polynomial t;
        t += Polynomial(c) * [&] {
            Polynomial mono(GaussianRational(1));
            for (const auto& [a, pw] : m.factors())
                for (int q = 0; q < pw; ++q) mono *= Polynomial(a);
            return mono;
        }();
        groups[group_of(m)] += t;
    }
    Polynomial result;
    for (auto& [key, part] : groups) {
        if (key.weight == 0) {
            result += part;
            continue;
        }
        std::vector<std::pair<int, std::string>> slots;
        for (const auto& [ns, cnt] : key.names)
            for (int t = 0; t < cnt; ++t) slots.push_back(ns);
        std::set<Monomial> lower;
        std::vector<std::pair<Atom, int>> acc;
        enumerate_monomials(slots, 0, key.weight - 1, acc, lower);
        std::vector<Polynomial> basis;
        for (const auto& m : lower) {
            Polynomial mono(GaussianRational(1));
            for (const auto& [a, pw] : m.factors())
                for (int q = 0; q < pw; ++q) mono *= Polynomial(a);
            Polynomial d = mono.differentiate();
            if (!d.is_zero()) basis.push_back(d);
        }
        result += reduce_against(part, std::move(basis));
    }
    return result;
}

bool is_total_derivative(const Polynomial& p) { return mod_derivatives(p).is_zero(); }

}  // namespace dispersym
