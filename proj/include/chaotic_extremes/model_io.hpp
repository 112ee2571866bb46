#ifndef CHAOTIC_EXTREMES_MODEL_IO_HPP
#define CHAOTIC_EXTREMES_MODEL_IO_HPP

// Text table for measure models:
//
//   kind,a,N,burn_in,seed
//   empirical,1.99,1000000,1000,42
//   -0.98999999999999999
//   ...
//
// The first line names the header fields, the second holds their values and
// every following line one sorted sample in shortest round-trip notation.
// The analytic a = 2 law is written with kind analytic-a2, N = 0 and no
// sample lines.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "format.hpp"
#include "invariant_measure.hpp"

namespace chaotic_extremes {

inline constexpr const char* model_header = "kind,a,N,burn_in,seed";

inline const char* kind_name(MeasureKind kind) {
  return kind == MeasureKind::analytic_a2 ? "analytic-a2" : "empirical";
}

inline void write_model(std::ostream& os, const MeasureModel& model) {
  os << model_header << '\n'
     << kind_name(model.kind()) << ',' << format_real(model.a()) << ',' << model.sample_count()
     << ',' << model.burn_in() << ',' << model.seed() << '\n';
  for (double x : model.samples()) os << format_real(x) << '\n';
}

inline MeasureModel read_model(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != model_header) {
    throw argument_error(std::string("model file: expected header line '") + model_header + "'");
  }
  if (!std::getline(is, line)) throw argument_error("model file: missing header values");
  std::vector<std::string> fields;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
  }
  if (fields.size() != 5) throw argument_error("model file: header values need 5 fields");
  const double a = parse_real(fields[1]);
  std::size_t N = 0, burn_in = 0;
  std::uint64_t seed = 0;
  try {
    N = std::stoull(fields[2]);
    burn_in = std::stoull(fields[3]);
    seed = std::stoull(fields[4]);
  } catch (const std::exception&) {
    throw argument_error("model file: N, burn_in and seed must be non-negative integers");
  }

  if (fields[0] == "analytic-a2") {
    if (a != 2.0) throw argument_error("model file: analytic-a2 requires a = 2");
    return MeasureModel::analytic_a2();
  }
  if (fields[0] != "empirical") throw argument_error("model file: unknown kind '" + fields[0] + "'");

  std::vector<double> samples;
  samples.reserve(N);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    samples.push_back(parse_real(line));
  }
  if (samples.size() != N) {
    std::ostringstream os;
    os << "model file: header announces " << N << " samples but " << samples.size()
       << " were found";
    throw argument_error(os.str());
  }
  return MeasureModel::from_sorted_samples(a, std::move(samples), burn_in, seed);
}

}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_MODEL_IO_HPP
