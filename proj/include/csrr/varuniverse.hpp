#ifndef CSRR_VARUNIVERSE_HPP
#define CSRR_VARUNIVERSE_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "csrr/error.hpp"

namespace csrr {

enum class VarKind { BasePoint, Fiber, Param };

// Ordered, immutable list of session variables.  The ordering is total and
// fixed; it drives the monomial order and the generator order of the
// exterior algebra.  At most one variable may be tagged Fiber.
class VarUniverse {
  public:
    static std::shared_ptr<const VarUniverse>
    make(std::vector<std::pair<std::string, VarKind>> vars) {
        auto u = std::shared_ptr<VarUniverse>(new VarUniverse());
        std::size_t fibers = 0;
        for (auto& [name, kind] : vars) {
            if (name.empty())
                throw InputError("empty variable name");
            if (u->index_.count(name))
                throw InputError("duplicate variable name: " + name);
            if (kind == VarKind::Fiber && ++fibers > 1)
                throw InputError("more than one fiber variable");
            u->index_.emplace(name, u->names_.size());
            u->names_.push_back(name);
            u->kinds_.push_back(kind);
        }
        return u;
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    VarKind kind(std::size_t i) const { return kinds_.at(i); }

    std::optional<std::size_t> index_of(std::string_view n) const {
        auto it = index_.find(std::string(n));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t require(std::string_view n) const {
        auto i = index_of(n);
        if (!i) throw Error("unknown variable: " + std::string(n));
        return *i;
    }

    std::optional<std::size_t> fiber() const {
        for (std::size_t i = 0; i < kinds_.size(); ++i)
            if (kinds_[i] == VarKind::Fiber) return i;
        return std::nullopt;
    }

    bool same(const VarUniverse& other) const {
        return this == &other ||
               (names_ == other.names_ && kinds_ == other.kinds_);
    }

  private:
    VarUniverse() = default;
    std::vector<std::string> names_;
    std::vector<VarKind> kinds_;
    std::unordered_map<std::string, std::size_t> index_;
};

using VarUniversePtr = std::shared_ptr<const VarUniverse>;

inline void check_same_universe(const VarUniversePtr& a,
                                const VarUniversePtr& b) {
    if (!a || !b || !a->same(*b))
        throw UniverseMismatch("operands live over different variable universes");
}

} // namespace csrr

#endif
