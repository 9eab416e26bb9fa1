#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "dimforge/error.hpp"

namespace dimforge {

// Search caps for the open-ended loops. DIMFORGE_BUDGET overrides them:
// either a single integer (ring-operation cap) or a comma list
// "ring_ops[,m_power[,monoid_stage]]".
struct budget {
    std::uint64_t ring_ops = 1'000'000; // pigeonhole / certificate step cap
    int m_power = 64;                   // lattice rounding power cap
    int monoid_stage = 4;               // monoid smoke-test stage cap
    int positivity_power = 200;         // eventual-positivity exponent cap
    int stage_shift = 64;               // generator stage-shift cap
    int enum_radius = 2;                // separating-row enumeration radius

    static budget from_env() {
        budget b;
        const char* raw = std::getenv("DIMFORGE_BUDGET");
        if (!raw || !*raw) return b;
        std::string s(raw);
        try {
            std::size_t pos = 0;
            std::uint64_t ring = std::stoull(s, &pos);
            if (ring == 0) throw std::invalid_argument("zero");
            b.ring_ops = ring;
            if (pos < s.size() && s[pos] == ',') {
                std::size_t pos2 = 0;
                std::string rest = s.substr(pos + 1);
                b.m_power = std::stoi(rest, &pos2);
                if (pos2 < rest.size() && rest[pos2] == ',')
                    b.monoid_stage = std::stoi(rest.substr(pos2 + 1));
            }
        } catch (const std::exception&) {
            throw usage_error("DIMFORGE_BUDGET must be an integer or 'ring_ops[,m_power[,monoid_stage]]', got '" + s + "'");
        }
        return b;
    }
};

// Counts work units against a cap; shared by the congruence searches.
class work_meter {
public:
    explicit work_meter(std::uint64_t cap) : cap_(cap) {}

    void charge(std::uint64_t units, const char* where) {
        used_ += units;
        if (used_ > cap_)
            fail(errc::budget_exceeded,
                 std::string(where) + " exceeded the configured budget of " + std::to_string(cap_) + " operations");
    }

    std::uint64_t used() const noexcept { return used_; }

private:
    std::uint64_t cap_;
    std::uint64_t used_ = 0;
};

} // namespace dimforge
