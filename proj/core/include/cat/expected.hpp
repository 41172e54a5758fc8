#pragma once

#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>

namespace cat {

// Minimal value-or-error holder. Shaped like std::expected so call sites can
// migrate once the toolchain ships <expected>.
template <class E>
struct Unexpected {
    E error;
};

template <class E>
Unexpected(E) -> Unexpected<E>;

class BadExpectedAccess : public std::logic_error {
public:
    BadExpectedAccess() : std::logic_error("bad Expected access") {}
};

template <class T, class E>
class Expected {
public:
    using value_type = T;
    using error_type = E;

    Expected(const T& value) : storage_(std::in_place_index<0>, value) {}
    Expected(T&& value) : storage_(std::in_place_index<0>, std::move(value)) {}
    template <class G>
    Expected(Unexpected<G> u) : storage_(std::in_place_index<1>, std::move(u.error)) {}

    [[nodiscard]] bool has_value() const noexcept { return storage_.index() == 0; }
    explicit operator bool() const noexcept { return has_value(); }

    T& value() & {
        if (!has_value()) throw BadExpectedAccess{};
        return std::get<0>(storage_);
    }
    const T& value() const& {
        if (!has_value()) throw BadExpectedAccess{};
        return std::get<0>(storage_);
    }
    T&& value() && {
        if (!has_value()) throw BadExpectedAccess{};
        return std::get<0>(std::move(storage_));
    }
    const E& error() const& {
        if (has_value()) throw BadExpectedAccess{};
        return std::get<1>(storage_);
    }

    T& operator*() & { return value(); }
    const T& operator*() const& { return value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }

    friend bool operator==(const Expected&, const Expected&) = default;

private:
    std::variant<T, E> storage_;
};

}  // namespace cat
