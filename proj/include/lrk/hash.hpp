#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace lrk {

/// 64-bit FNV-1a.
class Fnv1a64 {
public:
    void update(std::span<const std::byte> bytes) {
        for (std::byte b : bytes) {
            state_ ^= static_cast<std::uint64_t>(b);
            state_ *= 0x100000001b3ULL;
        }
    }
    void update(std::string_view s) { update(std::as_bytes(std::span(s.data(), s.size()))); }

    [[nodiscard]] std::uint64_t digest() const { return state_; }
    [[nodiscard]] std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace lrk
