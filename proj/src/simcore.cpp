#include "tailsim/simcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace tailsim::simcore {

namespace {

enum class EventKind { FileArrival, ChunkDeparture };

struct SimEvent {
    double time;
    std::uint64_t seq;  // tie break; assigned at creation, unique
    EventKind kind;
    std::size_t index;  // file class or server
};

struct EventAfter {
    bool operator()(const SimEvent &a, const SimEvent &b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

struct PendingChunk {
    std::uint64_t request_index;  // slot in the in-flight table
    std::size_t chunk_slot;
    double enqueue_time;
    double service_time;
    double service_start = -1.0;
};

struct InFlightRequest {
    std::uint64_t request_id;
    std::size_t file_class;
    double arrival;
    double chunk_size;
    std::size_t remaining;
    std::vector<ChunkRecord> chunks;
    double last_depart = 0.0;
};

struct ServerState {
    std::deque<PendingChunk> fifo;  // front is in service when nonempty
};

std::vector<double> draw_catalog(const SimConfig &cfg) {
    std::vector<double> sizes;
    sizes.reserve(cfg.workload.r());
    for (std::size_t i = 0; i < cfg.workload.r(); ++i) {
        const double u =
            rng::open_unit(rng::derive(cfg.catalog_seed, rng::StreamKind::Catalog, i));
        sizes.push_back(dist::sample_pareto(cfg.workload.file_classes[i].pareto, u));
    }
    return sizes;
}

SimResult run_engine(const SimConfig &cfg) {
    const auto &w = cfg.workload;
    if (w.r() == 0) throw std::invalid_argument("run_simulation: no file classes");
    if (cfg.horizon < 1) throw std::invalid_argument("run_simulation: horizon must be >= 1");
    if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 1.0))
        throw std::invalid_argument("run_simulation: warmup_fraction must be in [0,1)");
    if (cfg.servers.size() != w.n)
        throw std::invalid_argument("run_simulation: server rate count != n");

    auto validation = sched::validate_policy(cfg.policy, w);
    if (!validation.ok())
        throw std::invalid_argument("run_simulation: invalid scheduling policy");
    auto stability = sched::stability_check(cfg.policy, w, cfg.servers);
    if (stability.verdict == sched::StabilityVerdict::Unstable && !cfg.allow_unstable)
        throw std::runtime_error(
            "run_simulation: unstable configuration (rho >= 1); set allow_unstable to override");

    std::vector<double> catalog;
    if (cfg.chunk_size_mode == ChunkSizeMode::FixedCatalog) catalog = draw_catalog(cfg);

    std::priority_queue<SimEvent, std::vector<SimEvent>, EventAfter> events;
    std::uint64_t next_seq = 0;

    std::vector<rng::Stream> arrival_streams;
    arrival_streams.reserve(w.r());
    for (std::size_t c = 0; c < w.r(); ++c)
        arrival_streams.emplace_back(rng::derive(cfg.seed, rng::StreamKind::Arrival, c));

    for (std::size_t c = 0; c < w.r(); ++c) {
        const double t = arrival_streams[c].exponential(w.file_classes[c].lambda);
        events.push({t, next_seq++, EventKind::FileArrival, c});
    }

    std::vector<ServerState> servers(w.n);
    std::vector<InFlightRequest> inflight;
    inflight.reserve(1024);

    SimResult result;
    result.servers.assign(w.n, ServerStats{});
    result.requests.reserve(cfg.horizon);

    std::uint64_t dispatched = 0;
    std::uint64_t completed = 0;
    double now = 0.0;

    auto start_service = [&](std::size_t j, double t) {
        PendingChunk &job = servers[j].fifo.front();
        job.service_start = t;
        events.push({t + job.service_time, next_seq++, EventKind::ChunkDeparture, j});
    };

    while (completed < cfg.horizon) {
        if (events.empty())
            throw std::runtime_error("run_simulation: event queue drained before horizon");
        const SimEvent ev = events.top();
        events.pop();
        if (ev.time < now)
            throw std::runtime_error("run_simulation: event-queue corruption (time went backwards)");
        now = ev.time;

        if (ev.kind == EventKind::FileArrival) {
            const std::size_t c = ev.index;
            if (dispatched >= cfg.horizon) continue;  // stop generating load
            const std::uint64_t rid = dispatched++;

            // Next arrival of this class.
            events.push({now + arrival_streams[c].exponential(w.file_classes[c].lambda),
                         next_seq++, EventKind::FileArrival, c});

            double chunk_size;
            if (cfg.chunk_size_mode == ChunkSizeMode::FixedCatalog) {
                chunk_size = catalog[c];
            } else {
                const double u =
                    rng::open_unit(rng::derive(cfg.seed, rng::StreamKind::ChunkSize, rid));
                chunk_size = dist::sample_pareto(w.file_classes[c].pareto, u);
            }

            rng::Stream subset_stream(rng::derive(cfg.seed, rng::StreamKind::Subset, rid));
            const auto subset = sched::sample_subset(cfg.policy, c, subset_stream);

            const std::uint64_t slot = inflight.size();
            InFlightRequest req;
            req.request_id = rid;
            req.file_class = c;
            req.arrival = now;
            req.chunk_size = chunk_size;
            req.remaining = subset.size();
            req.chunks.resize(subset.size());
            inflight.push_back(std::move(req));

            for (std::size_t s = 0; s < subset.size(); ++s) {
                const std::size_t j = subset[s];
                const double u =
                    rng::open_unit(rng::derive2(cfg.seed, rng::StreamKind::Service, rid, s));
                const double service = chunk_size * (-std::log(u)) / cfg.servers[j].mu;
                inflight[slot].chunks[s].server = j;
                const bool was_idle = servers[j].fifo.empty();
                servers[j].fifo.push_back({slot, s, now, service});
                if (was_idle) start_service(j, now);
            }
        } else {
            ServerState &srv = servers[ev.index];
            if (srv.fifo.empty() || srv.fifo.front().service_start < 0.0)
                throw std::runtime_error("run_simulation: departure from idle server");
            const PendingChunk job = srv.fifo.front();
            srv.fifo.pop_front();

            InFlightRequest &req = inflight[job.request_index];
            ChunkRecord &rec = req.chunks[job.chunk_slot];
            rec.wait = job.service_start - job.enqueue_time;
            rec.service = job.service_time;
            result.servers[ev.index].chunks_served += 1;
            result.servers[ev.index].busy_time += job.service_time;
            req.last_depart = std::max(req.last_depart, now);

            if (--req.remaining == 0) {
                RequestRecord out;
                out.request_id = req.request_id;
                out.file_class = req.file_class;
                out.arrival = req.arrival;
                out.latency = req.last_depart - req.arrival;
                out.chunk_size = req.chunk_size;
                out.warmup = false;
                out.chunks = std::move(req.chunks);
                result.requests.push_back(std::move(out));
                ++completed;
            }

            if (!srv.fifo.empty()) start_service(ev.index, now);
        }
    }

    result.end_time = now;
    const auto warmup_count = static_cast<std::uint64_t>(
        std::floor(cfg.warmup_fraction * static_cast<double>(cfg.horizon)));
    for (std::uint64_t i = 0; i < warmup_count && i < result.requests.size(); ++i)
        result.requests[i].warmup = true;
    return result;
}

}  // namespace

SimResult run_simulation(const SimConfig &cfg) {
    if (cfg.genie) return run_genie(cfg);
    return run_engine(cfg);
}

SimResult run_genie(const SimConfig &cfg) {
    double pooled_rate = 0.0;
    for (const auto &s : cfg.servers) pooled_rate += s.mu;
    if (cfg.servers.empty()) throw std::invalid_argument("run_genie: no servers");

    SimConfig genie_cfg = cfg;
    genie_cfg.genie = false;
    genie_cfg.servers = {dist::ServerRate(pooled_rate)};
    genie_cfg.workload.n = 1;
    genie_cfg.workload.k = 1;
    genie_cfg.policy = sched::SchedulingPolicy::uniform(cfg.workload.r(), 1, 1);
    return run_engine(genie_cfg);
}

std::vector<double> waiting_times_per_server(const SimResult &result, std::size_t server) {
    // All chunks of a request enqueue at its arrival, and FIFO means the
    // per-server completion order equals the enqueue order.
    std::vector<std::pair<double, double>> by_enqueue;
    for (const auto &req : result.requests) {
        if (req.warmup) continue;
        for (const auto &chunk : req.chunks)
            if (chunk.server == server) by_enqueue.emplace_back(req.arrival, chunk.wait);
    }
    std::sort(by_enqueue.begin(), by_enqueue.end());
    std::vector<double> waits;
    waits.reserve(by_enqueue.size());
    for (const auto &[t, wval] : by_enqueue) waits.push_back(wval);
    return waits;
}

std::vector<double> file_latencies(const SimResult &result) {
    std::vector<double> latencies;
    latencies.reserve(result.requests.size());
    for (const auto &req : result.requests)
        if (!req.warmup) latencies.push_back(req.latency);
    return latencies;
}

namespace {
void append_double(std::string &line, double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, end);
}
}  // namespace

void export_trace(const SimResult &result, std::ostream &out) {
    std::string line;
    for (const auto &req : result.requests) {
        line.clear();
        line += std::to_string(req.request_id);
        line += ',';
        line += std::to_string(req.file_class);
        line += ',';
        append_double(line, req.arrival);
        line += ',';
        append_double(line, req.latency);
        line += ',';
        line += req.warmup ? '1' : '0';
        for (const auto &chunk : req.chunks) {
            line += ',';
            line += std::to_string(chunk.server);
            line += ',';
            append_double(line, chunk.wait);
            line += ',';
            append_double(line, chunk.service);
        }
        line += '\n';
        out << line;
    }
}

}  // namespace tailsim::simcore
