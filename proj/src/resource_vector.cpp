#include "slicing4meta/resource_vector.hpp"

#include <algorithm>
#include <sstream>

#include "slicing4meta/error.hpp"

namespace slicing4meta {

ResourceVector& ResourceVector::operator+=(const ResourceVector& o)
{
    comm_rate += o.comm_rate;
    compute += o.compute;
    storage += o.storage;
    rendering += o.rendering;
    return *this;
}

ResourceVector& ResourceVector::operator-=(const ResourceVector& o)
{
    comm_rate -= o.comm_rate;
    compute -= o.compute;
    storage -= o.storage;
    rendering -= o.rendering;
    return *this;
}

ResourceVector& ResourceVector::operator*=(double s)
{
    comm_rate *= s;
    compute *= s;
    storage *= s;
    rendering *= s;
    return *this;
}

bool ResourceVector::fits_within(const ResourceVector& other) const
{
    return comm_rate <= other.comm_rate && compute <= other.compute && storage <= other.storage &&
           rendering <= other.rendering;
}

std::string ResourceVector::to_string() const
{
    std::ostringstream os;
    os << '(' << comm_rate << ", " << compute << ", " << storage << ", " << rendering << ')';
    return os.str();
}

ResourceVector elementwise_max(const ResourceVector& a, const ResourceVector& b)
{
    return {std::max(a.comm_rate, b.comm_rate), std::max(a.compute, b.compute), std::max(a.storage, b.storage),
            std::max(a.rendering, b.rendering)};
}

std::string_view to_string(IsolationDegree d) noexcept
{
    switch (d) {
    case IsolationDegree::None: return "None";
    case IsolationDegree::Scheduling: return "Scheduling";
    case IsolationDegree::Logical: return "Logical";
    case IsolationDegree::Physical: return "Physical";
    }
    return "None";
}

IsolationDegree isolation_from_string(std::string_view s)
{
    if (s == "None") return IsolationDegree::None;
    if (s == "Scheduling") return IsolationDegree::Scheduling;
    if (s == "Logical") return IsolationDegree::Logical;
    if (s == "Physical") return IsolationDegree::Physical;
    throw Error(Errc::InvalidParams, "unknown isolation degree '" + std::string(s) + "'");
}

}  // namespace slicing4meta
