#pragma once

#include <string>
#include <vector>

#include "aoi/shs.hpp"

namespace aoi {

// Queueing discipline for preempted packets: WQ keeps them in a per-stream
// single waiting slot and resumes them, NQ discards them.
enum class Discipline { WQ, NQ };

std::string to_string(Discipline d);
Discipline discipline_from_string(const std::string& s);

// Shared-server system parameters. All streams share the same arrival rate
// lambda and service rate mu. `depth` is the number of higher-priority
// streams above the stream of interest (per-stream analysis); `streams` is
// the total stream count N (whole-system reports).
struct SystemConfig {
  double lambda = 1.0;
  double mu = 1.0;
  unsigned depth = 0;
  unsigned streams = 1;
};

// Throws InvalidConfig on nonpositive/non-finite rates or streams == 0.
void validate_config(const SystemConfig& config);

// Per-stream and total average ages for one (config, discipline) pair.
// per_stream[k] is the age of stream k+1, stream 1 having highest priority.
struct AgeReport {
  Discipline discipline = Discipline::WQ;
  double lambda = 0.0;
  double mu = 0.0;
  std::vector<double> per_stream;
  double total = 0.0;
};

// Chain for a stream of interest with `depth` higher-priority streams when
// every stream keeps a single waiting slot. States 0..depth count the
// higher-priority packets ahead; transitions are own-arrival self-loops at
// rate lambda resetting the system-packet age, escalations q -> q+1 at rate
// (depth-q)*lambda, de-escalations q -> q-1 at rate mu, and the delivery
// self-loop at state 0.
ShsModel build_wq_chain(const SystemConfig& config);

// Bufferless baseline chain: two states (0: serving the stream of interest,
// real or fake; 1: serving some higher-priority packet). Preempted packets
// are discarded; the return transition installs a fake update carrying the
// last delivered timestamp. Degenerates to the single-state preemptive
// M/M/1/1 chain at depth 0.
ShsModel build_nq_chain(const SystemConfig& config);

}  // namespace aoi
