#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tailsim/dist.hpp"
#include "tailsim/sched.hpp"

namespace tailsim::simcore {

enum class ChunkSizeMode { PerRequest, FixedCatalog };

struct SimConfig {
    sched::WorkloadSpec workload;
    std::vector<dist::ServerRate> servers;
    sched::SchedulingPolicy policy;
    std::uint64_t horizon = 0;  // completed-request target
    double warmup_fraction = 0.1;
    std::uint64_t seed = 0;
    ChunkSizeMode chunk_size_mode = ChunkSizeMode::PerRequest;
    std::uint64_t catalog_seed = 0;  // FixedCatalog only
    bool genie = false;
    bool allow_unstable = false;
};

struct ChunkRecord {
    std::size_t server;
    double wait;     // service_start - enqueue_time
    double service;  // realized B
};

// One completed file request; latency is the k-of-k join over its chunks.
struct RequestRecord {
    std::uint64_t request_id;
    std::size_t file_class;
    double arrival;
    double latency;
    double chunk_size;  // shared by all k chunks of the request
    bool warmup;
    std::vector<ChunkRecord> chunks;  // in dispatched-server order (sorted)
};

struct ServerStats {
    std::uint64_t chunks_served = 0;
    double busy_time = 0.0;
};

struct SimResult {
    std::vector<RequestRecord> requests;  // completion order
    std::vector<ServerStats> servers;
    double end_time = 0.0;
};

// Runs the discrete-event simulation: Poisson arrivals per file class,
// k-of-n dispatch through the policy, per-server FIFO queues with
// B = X * L service. Deterministic for a fixed config (seed included).
// Throws if the configuration is unstable and allow_unstable is not set.
SimResult run_simulation(const SimConfig &cfg);

// Pooled-server best case: a single queue at rate sum_j mu_j serving one
// chunk per file request. Trace schema identical to run_simulation.
SimResult run_genie(const SimConfig &cfg);

// Waiting times of all post-warmup chunks processed at one server, in
// completion order. Empty if the server received no chunks.
std::vector<double> waiting_times_per_server(const SimResult &result, std::size_t server);

// Post-warmup file latencies in completion order.
std::vector<double> file_latencies(const SimResult &result);

// One line per completed request:
//   request_id,class,arrival,latency,warmup_flag,server,wait,service[,server,wait,service...]
// Numeric fields use shortest round-trip formatting.
void export_trace(const SimResult &result, std::ostream &out);

}  // namespace tailsim::simcore
