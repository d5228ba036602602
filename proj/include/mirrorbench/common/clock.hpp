#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

namespace mirrorbench {

// Time source abstraction so retry backoff, cache TTLs, and run timestamps
// are testable against a virtual clock.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_unix_seconds() const = 0;
    // Monotonic seconds for latency/budget measurement.
    virtual double monotonic_seconds() const = 0;
    virtual void sleep_for_seconds(double seconds) = 0;
};

class SystemClock final : public Clock {
public:
    std::int64_t now_unix_seconds() const override {
        return std::chrono::duration_cast<std::chrono::seconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }
    double monotonic_seconds() const override {
        return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
            .count();
    }
    void sleep_for_seconds(double seconds) override {
        if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
};

// Advances only via sleeps; records every requested sleep for assertions.
class VirtualClock final : public Clock {
public:
    explicit VirtualClock(std::int64_t start_unix = 1700000000) : unix_seconds_(start_unix) {}

    std::int64_t now_unix_seconds() const override {
        std::lock_guard lock(mu_);
        return unix_seconds_;
    }
    double monotonic_seconds() const override {
        std::lock_guard lock(mu_);
        return monotonic_;
    }
    void sleep_for_seconds(double seconds) override {
        std::lock_guard lock(mu_);
        sleeps_.push_back(seconds);
        monotonic_ += seconds;
        unix_seconds_ += static_cast<std::int64_t>(seconds);
    }

    void advance_seconds(std::int64_t seconds) {
        std::lock_guard lock(mu_);
        unix_seconds_ += seconds;
        monotonic_ += static_cast<double>(seconds);
    }
    std::vector<double> recorded_sleeps() const {
        std::lock_guard lock(mu_);
        return sleeps_;
    }

private:
    mutable std::mutex mu_;
    std::int64_t unix_seconds_;
    double monotonic_ = 0.0;
    std::vector<double> sleeps_;
};

}  // namespace mirrorbench
