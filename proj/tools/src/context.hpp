#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "uict/cli/table.hpp"
#include "uict/offspring.hpp"
#include "uict/rng.hpp"

namespace uict::cli {

// Settings shared by every command.
struct Common {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out;
    std::string dist = "geometric";
    double a = 1.0;
    bool quiet = false;
};

struct Context {
    Common common;
    std::string command;
    std::filesystem::path out_dir;
    std::string manifest_hash;
    std::deque<Table> tables;
    std::vector<std::filesystem::path> files;

    OffspringDistribution distribution() const;

    Table& add_table(std::string name, std::vector<std::string> columns);

    // Stream for replica (or chunk) i; independent of the thread count.
    Rng stream(std::uint64_t i) const { return Rng(common.seed).split(i); }

    // Writes a data file whose first line is "# manifest=<hash>".
    void write_file(const std::string& name, const std::string& body);
};

// Runs f(i) for i in [0, n) on up to `threads` workers. Callers store
// results by index, so the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        const auto workers = std::min<std::size_t>(threads, n);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                    try {
                        f(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = n;
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
}

// "1..5", "2,4,8" or a mix such as "1..3,10".
std::vector<std::int64_t> parse_int_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

struct SampleOptions {
    std::string ensemble = "uict";
    std::uint32_t height = 64;
    std::uint64_t area = 8;
    std::uint64_t replicas = 1;
};

struct ExactOptions {
    std::string table = "girth";
    double g = 0.5;
    std::uint64_t k_max = 1000;
    std::string n = "1..5";
    std::uint32_t oracle_max = 4;
    double tol = 1e-10;
    std::string k = "1,2,5,10,20";
    std::string radii = "1..20";
    std::string z = "0.9";
};

struct WalkOptions {
    std::string mode = "exact";
    std::string fixture;
    std::string graph;
    std::string ensemble;
    std::uint32_t height = 200;
    std::uint64_t length = 10000;
    std::uint64_t depth = 0;
    std::uint64_t t_max = 1000;
    std::uint64_t walkers = 1000;
    std::uint64_t graphs = 1;
    std::uint64_t fit_min = 100;
    double censor_threshold = 0.01;
    std::string x;
    std::string upper = "certain";
};

struct DimsOptions {
    std::string ensemble = "R";
    std::string quantity = "ds";
    std::uint64_t graphs = 200;
    std::uint64_t length = 100000;
    int j_min = 6;
    int j_max = 20;
    double max_width = 0.02;
    std::string radii = "16,32,64,128,256,512";
    std::uint32_t height = 400;
    std::uint64_t t_max = 100000;
    std::uint64_t walkers = 20;
    std::uint64_t fit_min = 100;
    double censor_threshold = 0.01;
};

struct ResistOptions {
    std::string ensemble = "uict";
    std::string fixture;
    std::string graph;
    std::string m = "1,2,3,5";
    std::uint32_t height = 64;
    std::uint64_t graphs = 10;
    std::string k = "1..64";
    std::string boundary = "added_top";
    double tol = 1e-10;
    std::uint64_t direct_limit = 100000;
};

struct DisttestOptions {
    std::string test = "slice";
    std::string ensemble = "Rprime";
    std::string level = "5";
    std::uint64_t samples = 100000;
    std::uint32_t bins = 200;
    std::string k = "1,2,5,10,20";
    std::string radii = "1,2,10,100";
    double z = 0.9;
    std::uint64_t area = 3;
    std::uint32_t max_area = 16;
    std::uint64_t random = 10000;
    std::uint64_t max_edges = 1000;
};

void run_sample(const SampleOptions& o, Context& ctx);
void run_exact(const ExactOptions& o, Context& ctx);
void run_walk(const WalkOptions& o, Context& ctx);
void run_dims(const DimsOptions& o, Context& ctx);
void run_resist(const ResistOptions& o, Context& ctx);
void run_disttest(const DisttestOptions& o, Context& ctx);

}  // namespace uict::cli
