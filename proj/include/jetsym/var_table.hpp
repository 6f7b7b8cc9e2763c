#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jetsym/error.hpp"

namespace jetsym {

enum class VarKind { Independent, Dependent, Jet, Parameter };

/// One coordinate of a VarTable. Indices are 0-based; names are 1-based ("x1", "u2", "p1_2").
struct Variable {
    VarKind kind = VarKind::Parameter;
    int index = 0;          ///< i for x_i, mu for u^mu and jets
    std::vector<int> multi; ///< sorted derivative multi-index (jets only)
    std::string name;

    int order() const { return static_cast<int>(multi.size()); }
};

/// Canonical ordered list of variables shared by all polynomials of one computation.
///
/// Jet tables order their coordinates x_1..x_n, u^1..u^m, then jet variables
/// u^mu_I graded by |I| and lexicographic in (mu, I), then named parameters.
class VarTable {
public:
    using Ptr = std::shared_ptr<const VarTable>;

    static Ptr jet(int n, int m, int max_jet_order, std::vector<std::string> parameters = {}) {
        if (n < 1 || m < 1) throw Error("jet space needs n >= 1 and m >= 1");
        if (max_jet_order < 0) throw Error("negative jet order");
        auto t = std::shared_ptr<VarTable>(new VarTable());
        t->n_ = n;
        t->m_ = m;
        t->max_jet_order_ = max_jet_order;
        for (int i = 0; i < n; ++i) t->push({VarKind::Independent, i, {}, "x" + std::to_string(i + 1)});
        for (int mu = 0; mu < m; ++mu) t->push({VarKind::Dependent, mu, {}, "u" + std::to_string(mu + 1)});
        for (int s = 1; s <= max_jet_order; ++s) {
            for (int mu = 0; mu < m; ++mu) {
                for (auto& multi : sorted_multi_indices(n, s)) {
                    std::string name = "p" + std::to_string(mu + 1);
                    for (int idx : multi) name += "_" + std::to_string(idx + 1);
                    t->jet_ids_[{mu, multi}] = t->vars_.size();
                    t->push({VarKind::Jet, mu, multi, std::move(name)});
                }
            }
        }
        for (auto& p : parameters) t->push({VarKind::Parameter, 0, {}, p});
        return t;
    }

    /// A table of free named variables (no jet structure).
    static Ptr plain(const std::vector<std::string>& names) {
        auto t = std::shared_ptr<VarTable>(new VarTable());
        for (auto& nm : names) t->push({VarKind::Parameter, 0, {}, nm});
        return t;
    }

    std::size_t size() const { return vars_.size(); }
    const Variable& operator[](std::size_t id) const { return vars_.at(id); }
    const std::vector<Variable>& variables() const { return vars_; }

    int n() const { return n_; }
    int m() const { return m_; }
    int max_jet_order() const { return max_jet_order_; }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = by_name_.find(std::string(name));
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t id(std::string_view name) const {
        auto v = find(name);
        if (!v) throw Error("unknown variable '" + std::string(name) + "'");
        return *v;
    }

    std::size_t x(int i) const {
        if (i < 0 || i >= n_) throw Error("independent variable index out of range");
        return static_cast<std::size_t>(i);
    }
    std::size_t u(int mu) const {
        if (mu < 0 || mu >= m_) throw Error("dependent variable index out of range");
        return static_cast<std::size_t>(n_ + mu);
    }
    /// Jet coordinate u^mu_I; the multi-index is sorted first, so order of indices does not matter.
    std::size_t jet(int mu, std::vector<int> multi) const {
        std::sort(multi.begin(), multi.end());
        if (multi.empty()) return u(mu);
        if (static_cast<int>(multi.size()) > max_jet_order_)
            throw Error("jet order " + std::to_string(multi.size()) + " exceeds table maximum " +
                        std::to_string(max_jet_order_));
        auto it = jet_ids_.find({mu, multi});
        if (it == jet_ids_.end()) throw Error("jet coordinate out of range");
        return it->second;
    }

    bool is_base(std::size_t id) const {
        auto k = vars_.at(id).kind;
        return k == VarKind::Independent || k == VarKind::Dependent;
    }
    int jet_order(std::size_t id) const {
        const auto& v = vars_.at(id);
        return v.kind == VarKind::Jet ? v.order() : 0;
    }

    /// All sorted multi-indices (t_1 <= ... <= t_s) over {0..n-1}.
    static std::vector<std::vector<int>> sorted_multi_indices(int n, int s) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur;
        auto rec = [&](auto&& self, int start) -> void {
            if (static_cast<int>(cur.size()) == s) {
                out.push_back(cur);
                return;
            }
            for (int i = start; i < n; ++i) {
                cur.push_back(i);
                self(self, i);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        return out;
    }

private:
    VarTable() = default;

    void push(Variable v) {
        if (by_name_.count(v.name)) throw Error("duplicate variable name '" + v.name + "'");
        by_name_[v.name] = vars_.size();
        vars_.push_back(std::move(v));
    }

    int n_ = 0;
    int m_ = 0;
    int max_jet_order_ = 0;
    std::vector<Variable> vars_;
    std::map<std::string, std::size_t> by_name_;
    std::map<std::pair<int, std::vector<int>>, std::size_t> jet_ids_;
};

using TablePtr = VarTable::Ptr;

} // namespace jetsym
