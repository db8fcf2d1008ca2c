#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace slicing4meta {

/// Quantities on the four resource dimensions of the virtual pool.
///
/// Units: comm_rate in Mb/s (downlink aggregate), compute in abstract units,
/// storage in GB, rendering in K where 1 K is 960x480 pixels.
struct ResourceVector {
    double comm_rate = 0.0;
    double compute = 0.0;
    double storage = 0.0;
    double rendering = 0.0;

    static constexpr std::size_t kDimensions = 4;

    static ResourceVector rendering_only(double k) { return {0.0, 0.0, 0.0, k}; }

    std::array<double, kDimensions> as_array() const { return {comm_rate, compute, storage, rendering}; }
    static ResourceVector from_array(const std::array<double, kDimensions>& a) { return {a[0], a[1], a[2], a[3]}; }

    bool is_zero() const { return comm_rate == 0.0 && compute == 0.0 && storage == 0.0 && rendering == 0.0; }
    bool is_nonnegative() const { return comm_rate >= 0.0 && compute >= 0.0 && storage >= 0.0 && rendering >= 0.0; }

    ResourceVector& operator+=(const ResourceVector& o);
    ResourceVector& operator-=(const ResourceVector& o);
    ResourceVector& operator*=(double s);

    friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
    friend ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }
    friend ResourceVector operator*(ResourceVector a, double s) { return a *= s; }
    friend ResourceVector operator*(double s, ResourceVector a) { return a *= s; }
    friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

    /// Element-wise <=.
    bool fits_within(const ResourceVector& other) const;

    std::string to_string() const;
};

ResourceVector elementwise_max(const ResourceVector& a, const ResourceVector& b);

/// Ordered isolation strength between MSIs. Lower degrees share more easily.
enum class IsolationDegree : int { None = 0, Scheduling = 1, Logical = 2, Physical = 3 };

std::string_view to_string(IsolationDegree d) noexcept;
IsolationDegree isolation_from_string(std::string_view s);

}  // namespace slicing4meta
