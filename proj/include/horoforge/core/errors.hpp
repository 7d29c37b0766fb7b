#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace horoforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A point's encoding disagrees with the domain it is passed to.
class DomainMismatchError : public Error {
public:
    using Error::Error;
};

// The encoding is right but the value violates the domain (Im <= 0, zero vector, ...).
class InvalidPointError : public Error {
public:
    using Error::Error;
};

class UnsupportedOperationError : public Error {
public:
    using Error::Error;
};

class LandmarkMismatchError : public Error {
public:
    using Error::Error;
};

class NotCauchyError : public Error {
public:
    NotCauchyError(const std::string& what, std::size_t first, std::size_t second)
        : Error(what), first_index(first), second_index(second) {}

    std::size_t first_index;
    std::size_t second_index;
};

} // namespace horoforge
