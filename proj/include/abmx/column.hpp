#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "abmx/errors.hpp"

namespace abmx {

using Index = std::int32_t;

// Boolean columns are byte vectors (0 / 1); vector<bool> defeats spans.
using Mask = std::vector<std::uint8_t>;

enum class Kind { Int, Real, Bool };

const char* kind_name(Kind k);

// One fixed-length array of a single scalar kind. The length is set at
// construction and never changes.
class Column {
public:
    Column() : data_(std::vector<std::int64_t>{}) {}

    static Column ints(std::size_t n, std::int64_t fill = 0);
    static Column reals(std::size_t n, double fill = 0.0);
    static Column bools(std::size_t n, bool fill = false);
    static Column of(std::vector<std::int64_t> v) { return Column(std::move(v)); }
    static Column of(std::vector<double> v) { return Column(std::move(v)); }
    static Column of(Mask v) { return Column(std::move(v)); }
    static Column zeros(Kind k, std::size_t n);

    Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }
    std::size_t size() const noexcept;

    std::span<const std::int64_t> ints() const { return as<std::int64_t>(); }
    std::span<std::int64_t> ints() { return as_mut<std::int64_t>(); }
    std::span<const double> reals() const { return as<double>(); }
    std::span<double> reals() { return as_mut<double>(); }
    std::span<const std::uint8_t> bools() const { return as<std::uint8_t>(); }
    std::span<std::uint8_t> bools() { return as_mut<std::uint8_t>(); }

    friend bool bitwise_equal(const Column& a, const Column& b);

private:
    explicit Column(std::vector<std::int64_t> v) : data_(std::move(v)) {}
    explicit Column(std::vector<double> v) : data_(std::move(v)) {}
    explicit Column(Mask v) : data_(std::move(v)) {}

    template <class T>
    std::span<const T> as() const {
        if (const auto* p = std::get_if<std::vector<T>>(&data_))
            return {p->data(), p->size()};
        throw SchemaError(std::string("column kind mismatch: is ") + kind_name(kind()));
    }
    template <class T>
    std::span<T> as_mut() {
        if (auto* p = std::get_if<std::vector<T>>(&data_))
            return {p->data(), p->size()};
        throw SchemaError(std::string("column kind mismatch: is ") + kind_name(kind()));
    }

    std::variant<std::vector<std::int64_t>, std::vector<double>, Mask> data_;
};

// A named collection of equal-length columns. Field names are unique and
// iteration follows insertion order (that order is part of the deterministic
// RNG schedules, see rng.hpp).
class FieldBundle {
public:
    FieldBundle() = default;
    explicit FieldBundle(std::size_t length) : length_(length) {}

    std::size_t length() const noexcept { return length_; }
    std::size_t field_count() const noexcept { return fields_.size(); }

    void add(std::string name, Column col);
    void add_int(std::string name, std::int64_t fill = 0) { add(std::move(name), Column::ints(length_, fill)); }
    void add_real(std::string name, double fill = 0.0) { add(std::move(name), Column::reals(length_, fill)); }
    void add_bool(std::string name, bool fill = false) { add(std::move(name), Column::bools(length_, fill)); }

    bool has(std::string_view name) const noexcept;
    std::size_t index_of(std::string_view name) const; // throws SchemaError if absent
    const std::string& name_at(std::size_t i) const { return fields_[i].first; }

    const Column& col(std::size_t i) const { return fields_[i].second; }
    Column& col(std::size_t i) { return fields_[i].second; }
    const Column& col(std::string_view name) const { return fields_[index_of(name)].second; }
    Column& col(std::string_view name) { return fields_[index_of(name)].second; }

    std::span<const std::int64_t> ints(std::string_view name) const { return col(name).ints(); }
    std::span<std::int64_t> ints(std::string_view name) { return col(name).ints(); }
    std::span<const double> reals(std::string_view name) const { return col(name).reals(); }
    std::span<double> reals(std::string_view name) { return col(name).reals(); }
    std::span<const std::uint8_t> bools(std::string_view name) const { return col(name).bools(); }
    std::span<std::uint8_t> bools(std::string_view name) { return col(name).bools(); }

    bool same_schema(const FieldBundle& other) const;

    friend bool bitwise_equal(const FieldBundle& a, const FieldBundle& b);

private:
    std::size_t length_ = 0;
    std::vector<std::pair<std::string, Column>> fields_;
};

} // namespace abmx
