#pragma once

// Output helpers for the experiment runner: versioned CSV/JSON emission
// with the run configuration hashed into every file, and a bounded worker
// pool whose merge order is independent of the worker count.

#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace kdvlab {

inline constexpr const char* kVersion = "0.1.0";

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hash_hex(const std::string& s) {
    std::ostringstream os;
    os << std::hex << fnv1a(s);
    return os.str();
}

/// CSV with '#' comment header carrying version and config hash. Rows are
/// buffered and written in one shot so a failed run leaves no partial file.
class CsvReport {
  public:
    CsvReport(std::string header, std::string config_string)
        : header_(std::move(header)), config_(std::move(config_string)) {}

    void row(const std::string& line) { rows_.push_back(line); }

    std::string str() const {
        std::ostringstream os;
        os << "# kdvlab " << kVersion << " config_hash=" << hash_hex(config_)
           << "\n";
        os << "# config: " << config_ << "\n";
        os << header_ << "\n";
        for (const auto& r : rows_) os << r << "\n";
        return os.str();
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << str();
    }

  private:
    std::string header_;
    std::string config_;
    std::vector<std::string> rows_;
};

/// Run tasks 0..count-1 on `workers` threads; results land in a vector by
/// task index, so output order never depends on scheduling.
template <typename T>
std::vector<T> parallel_map(int count, int workers,
                            const std::function<T(int)>& task) {
    std::vector<T> out(static_cast<size_t>(count));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = task(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                out[static_cast<size_t>(i)] = task(i);
        });
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace kdvlab
