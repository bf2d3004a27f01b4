#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mirrorplan/harmony/dominance.hpp"
#include "mirrorplan/harmony/errors.hpp"
#include "mirrorplan/harmony/problem.hpp"

namespace mirrorplan::hs {

/**
 * Capacity-bounded set of mutually non-dominated feasible members.
 *
 * Besides the bounded set the archive keeps the full non-dominated front of
 * everything it has accepted. Members evicted for crowding stay in that front,
 * so a later member they dominate is still rejected and the reported set never
 * regresses to a point dominated by something reported earlier.
 */
class ParetoArchive {
public:
    explicit ParetoArchive(std::size_t capacity = 10) : capacity_(capacity) {
        if (capacity_ == 0) throw std::invalid_argument("archive capacity must be positive");
    }

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    std::span<const Member> members() const noexcept { return members_; }
    /// Every non-dominated member accepted so far, including crowding-evicted ones.
    std::span<const Member> front() const noexcept { return front_; }

    /// Offer a feasible member. Returns true when it is part of the bounded set afterwards.
    bool update(const Member& member) {
        if (!member.feasible) throw InfeasibleMember("only feasible members can be archived");
        for (const auto& m : front_) {
            if (objective_dominates(m.f, member.f) || m.x == member.x) return false;
        }
        std::erase_if(front_, [&](const Member& m) { return objective_dominates(member.f, m.f); });
        front_.push_back(member);

        std::erase_if(members_, [&](const Member& m) { return objective_dominates(member.f, m.f); });
        members_.push_back(member);
        if (members_.size() <= capacity_) return true;

        std::vector<std::vector<double>> points;
        points.reserve(members_.size());
        for (const auto& m : members_) points.push_back(m.f);
        const auto crowding = crowding_distances(points);
        // Smallest crowding goes; among ties the most recent member goes.
        std::size_t victim = 0;
        for (std::size_t i = 1; i < members_.size(); ++i) {
            if (crowding[i] <= crowding[victim]) victim = i;
        }
        const bool evicted_self = victim + 1 == members_.size();
        members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(victim));
        return !evicted_self;
    }

private:
    std::size_t capacity_;
    std::vector<Member> members_;
    std::vector<Member> front_;
};

}  // namespace mirrorplan::hs
