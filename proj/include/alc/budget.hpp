#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace alc {

/// Raised when an engine exceeds a configured size or time budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wall-clock cutoff shared by the engines of one instance.
class Deadline {
public:
    Deadline() = default;
    static Deadline after(std::chrono::milliseconds d) {
        Deadline out;
        out.at_ = std::chrono::steady_clock::now() + d;
        return out;
    }

    bool expired() const {
        return at_ && std::chrono::steady_clock::now() >= *at_;
    }

    void check(const char* what) const {
        if (expired()) throw BudgetExceeded(std::string(what) + ": time budget exhausted");
    }

private:
    std::optional<std::chrono::steady_clock::time_point> at_;
};

}  // namespace alc
