#include "tq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tq/rng.hpp"
#include "tq/turbo.hpp"

namespace tq {

namespace {

// Stopping is checked at batch boundaries only, so the set of simulated
// blocks is a pure function of the stopping parameters, never of timing or
// the thread count.
constexpr long long kBatchBlocks = 32;

}  // namespace

void SweepConfig::validate() const {
  scenario.validate();
  if (equalizers.empty())
    throw std::invalid_argument("sweep: no equalizer configurations");
  if (min_errors < 100 && !allow_low_confidence)
    throw std::invalid_argument(
        "sweep: min_errors below 100 needs allow_low_confidence");
  if (min_errors < 0) throw std::invalid_argument("sweep: negative min_errors");
  if (max_blocks < 1) throw std::invalid_argument("sweep: max_blocks must be >= 1");
  if (threads < 1) throw std::invalid_argument("sweep: threads must be >= 1");
  if (ebno_db.empty() && scenario.ebno_grid_db.empty())
    throw std::invalid_argument("sweep: no Eb/N0 grid");
}

std::vector<BerRecord> run_sweep(const SweepConfig& cfg,
                                 const SweepProgress& progress) {
  cfg.validate();
  const TurboSystem system = make_turbo_system(cfg.scenario);
  const std::vector<double>& grid =
      cfg.ebno_db.empty() ? cfg.scenario.ebno_grid_db : cfg.ebno_db;
  const int iterations = cfg.scenario.iterations;
  const std::uint64_t scenario_seed =
      derive_seed(cfg.seed, hash_string(cfg.scenario.name));

  std::vector<BerRecord> records;
  for (const EqualizerConfig& eq : cfg.equalizers) {
    eq.validate(system.channel);
    for (const double ebno : grid) {
      const double sigma2 = noise_variance_for(ebno, cfg.scenario);

      std::vector<long long> errors(iterations, 0), frame_errors(iterations, 0);
      long long blocks = 0;
      // The error threshold is only consulted once at least one block exists.
      while (blocks < cfg.max_blocks &&
             (blocks == 0 || errors[iterations - 1] < cfg.min_errors)) {
        const long long batch =
            std::min<long long>(kBatchBlocks, cfg.max_blocks - blocks);
        std::vector<IterationTrace> traces(batch);
        const int workers =
            static_cast<int>(std::min<long long>(cfg.threads, batch));
        if (workers <= 1) {
          for (long long b = 0; b < batch; ++b)
            traces[b] = simulate_block(system, eq, sigma2,
                                       derive_seed(scenario_seed, blocks + b));
        } else {
          std::atomic<long long> next{0};
          auto worker = [&] {
            for (long long b = next.fetch_add(1); b < batch;
                 b = next.fetch_add(1))
              traces[b] = simulate_block(system, eq, sigma2,
                                         derive_seed(scenario_seed, blocks + b));
          };
          std::vector<std::thread> pool;
          pool.reserve(workers);
          for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
          for (std::thread& th : pool) th.join();
        }
        for (const IterationTrace& trace : traces) {
          for (int it = 0; it < iterations; ++it) {
            errors[it] += trace[it].bit_errors;
            frame_errors[it] += trace[it].frame_error ? 1 : 0;
          }
        }
        blocks += batch;
        if (progress) progress(eq, ebno, blocks, errors[iterations - 1]);
      }

      for (int it = 0; it < iterations; ++it) {
        BerRecord rec;
        rec.scenario = cfg.scenario.name;
        rec.algorithm = algorithm_name(eq.algorithm);
        rec.budget = eq.budget();
        rec.ebno_db = ebno;
        rec.iteration = it + 1;
        rec.bit_errors = errors[it];
        rec.bits = blocks * cfg.scenario.info_bits;
        rec.frames = blocks;
        rec.frame_errors = frame_errors[it];
        rec.seed = cfg.seed;
        records.push_back(std::move(rec));
      }
    }
  }
  if (!cfg.out.empty()) write_ber_csv_file(cfg.out, records);
  return records;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_ber_csv(std::ostream& out, std::span<const BerRecord> records) {
  out << "scenario,algorithm,budget,ebno_db,iteration,bit_errors,bits,frames,"
         "frame_errors,seed\n";
  for (const BerRecord& r : records) {
    out << r.scenario << ',' << r.algorithm << ',' << r.budget << ','
        << format_double(r.ebno_db) << ',' << r.iteration << ','
        << r.bit_errors << ',' << r.bits << ',' << r.frames << ','
        << r.frame_errors << ',' << r.seed << '\n';
  }
}

void write_ber_csv_file(const std::string& path,
                        std::span<const BerRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_ber_csv(out, records);
}

std::vector<BerRecord> read_ber_csv(std::istream& in) {
  std::vector<BerRecord> records;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("ber csv: empty input");
  if (line.rfind("scenario,", 0) != 0)
    throw std::runtime_error("ber csv: bad header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10) throw std::runtime_error("ber csv: bad row");
    BerRecord r;
    r.scenario = fields[0];
    r.algorithm = fields[1];
    r.budget = std::stoi(fields[2]);
    r.ebno_db = std::stod(fields[3]);
    r.iteration = std::stoi(fields[4]);
    r.bit_errors = std::stoll(fields[5]);
    r.bits = std::stoll(fields[6]);
    r.frames = std::stoll(fields[7]);
    r.frame_errors = std::stoll(fields[8]);
    r.seed = std::stoull(fields[9]);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<BerRecord> read_ber_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_ber_csv(in);
}

std::optional<double> ebno_at_target(std::span<const BerRecord> records,
                                     const std::string& algorithm, int budget,
                                     int iteration, double target_ber) {
  struct Point {
    double ebno;
    double ber;
  };
  std::vector<Point> curve;
  for (const BerRecord& r : records) {
    if (r.algorithm != algorithm || r.budget != budget ||
        r.iteration != iteration || r.bits <= 0)
      continue;
    // Zero-error points are floored at half an error for interpolation.
    const double ber = std::max(r.ber(), 0.5 / static_cast<double>(r.bits));
    curve.push_back({r.ebno_db, ber});
  }
  std::sort(curve.begin(), curve.end(),
            [](const Point& a, const Point& b) { return a.ebno < b.ebno; });
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const Point& hi = curve[i];
    const Point& lo = curve[i + 1];
    if (hi.ber < target_ber || lo.ber > target_ber) continue;
    if (hi.ber == lo.ber) return hi.ebno;
    const double frac = (std::log(target_ber) - std::log(hi.ber)) /
                        (std::log(lo.ber) - std::log(hi.ber));
    return hi.ebno + frac * (lo.ebno - hi.ebno);
  }
  return std::nullopt;
}

}  // namespace tq
