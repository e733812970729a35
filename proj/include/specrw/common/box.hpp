#pragma once

#include <memory>
#include <utility>

namespace specrw {

/// Heap box with value semantics: copying the box deep-copies the payload.
/// Used for optional recursive AST members (std::optional needs a complete type).
template <typename T>
class Box {
public:
    Box() = default;
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    bool has_value() const { return ptr_ != nullptr; }
    explicit operator bool() const { return has_value(); }

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    void reset() { ptr_.reset(); }
    template <typename... Args>
    T& emplace(Args&&... args) {
        ptr_ = std::make_unique<T>(std::forward<Args>(args)...);
        return *ptr_;
    }

private:
    std::unique_ptr<T> ptr_;
};

} // namespace specrw
