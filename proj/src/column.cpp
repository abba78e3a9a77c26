#include "abmx/column.hpp"

#include <cstring>

namespace abmx {

const char* kind_name(Kind k) {
    switch (k) {
    case Kind::Int: return "int";
    case Kind::Real: return "real";
    case Kind::Bool: return "bool";
    }
    return "?";
}

Column Column::ints(std::size_t n, std::int64_t fill) {
    return Column(std::vector<std::int64_t>(n, fill));
}

Column Column::reals(std::size_t n, double fill) {
    return Column(std::vector<double>(n, fill));
}

Column Column::bools(std::size_t n, bool fill) {
    return Column(Mask(n, fill ? 1 : 0));
}

Column Column::zeros(Kind k, std::size_t n) {
    switch (k) {
    case Kind::Int: return ints(n);
    case Kind::Real: return reals(n);
    case Kind::Bool: return bools(n);
    }
    return ints(n);
}

std::size_t Column::size() const noexcept {
    return std::visit([](const auto& v) { return v.size(); }, data_);
}

bool bitwise_equal(const Column& a, const Column& b) {
    if (a.kind() != b.kind() || a.size() != b.size())
        return false;
    switch (a.kind()) {
    case Kind::Int: {
        auto x = a.ints(), y = b.ints();
        return std::memcmp(x.data(), y.data(), x.size_bytes()) == 0;
    }
    case Kind::Real: {
        auto x = a.reals(), y = b.reals();
        return std::memcmp(x.data(), y.data(), x.size_bytes()) == 0;
    }
    case Kind::Bool: {
        auto x = a.bools(), y = b.bools();
        return std::memcmp(x.data(), y.data(), x.size_bytes()) == 0;
    }
    }
    return false;
}

void FieldBundle::add(std::string name, Column col) {
    if (has(name))
        throw SchemaError("duplicate field name: " + name);
    if (col.size() != length_)
        throw SchemaError("column length mismatch for field '" + name + "'");
    fields_.emplace_back(std::move(name), std::move(col));
}

bool FieldBundle::has(std::string_view name) const noexcept {
    for (const auto& [n, _] : fields_)
        if (n == name)
            return true;
    return false;
}

std::size_t FieldBundle::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i)
        if (fields_[i].first == name)
            return i;
    throw SchemaError("unknown field: " + std::string(name));
}

bool FieldBundle::same_schema(const FieldBundle& other) const {
    if (length_ != other.length_ || fields_.size() != other.fields_.size())
        return false;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (fields_[i].first != other.fields_[i].first ||
            fields_[i].second.kind() != other.fields_[i].second.kind())
            return false;
    }
    return true;
}

bool bitwise_equal(const FieldBundle& a, const FieldBundle& b) {
    if (!a.same_schema(b))
        return false;
    for (std::size_t i = 0; i < a.field_count(); ++i)
        if (!bitwise_equal(a.col(i), b.col(i)))
            return false;
    return true;
}

} // namespace abmx
