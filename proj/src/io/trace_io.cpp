#include "rjmcmc/io/trace_io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rjmcmc::io {

namespace {

std::string fmt(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str())
    throw std::runtime_error("trace_io: malformed number '" + s + "'");
  return v;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("trace_io: cannot open " + path.string());
  return in;
}

}  // namespace

ParamNamer mixture_param_namer() {
  return [](int model_index, std::size_t position) {
    const auto k = static_cast<std::size_t>(model_index) + 1;
    if (position < k) return std::make_pair(std::string("w"), static_cast<int>(position));
    if (position < 2 * k)
      return std::make_pair(std::string("mu"), static_cast<int>(position - k));
    return std::make_pair(std::string("var"), static_cast<int>(position - 2 * k));
  };
}

ParamNamer ar_param_namer() {
  return [](int model_index, std::size_t position) {
    const auto k = static_cast<std::size_t>(model_index) + 1;
    if (position < k)
      return std::make_pair(std::string("a"), static_cast<int>(position));
    return std::make_pair(std::string("noise_var"), 0);
  };
}

ParamNamer changepoint_param_namer() {
  return [](int model_index, std::size_t position) {
    const auto k = static_cast<std::size_t>(model_index);
    if (position < k)
      return std::make_pair(std::string("pos"), static_cast<int>(position));
    return std::make_pair(std::string("h"), static_cast<int>(position - k));
  };
}

ParamNamer generic_param_namer() {
  return [](int, std::size_t position) {
    return std::make_pair(std::string("theta"), static_cast<int>(position));
  };
}

void write_replicate(const ReplicateTrace& replicate,
                     const std::filesystem::path& states_path,
                     const std::filesystem::path& params_path,
                     const std::filesystem::path& accepts_path,
                     const ParamNamer& namer) {
  std::ofstream states(states_path);
  std::ofstream params(params_path);
  std::ofstream accepts(accepts_path);
  if (!states || !params || !accepts)
    throw std::runtime_error("trace_io: cannot open output files");

  states << "replicate,iteration,k,log_likelihood,log_prior,deviance\n";
  params << "replicate,iteration,name,index,value\n";
  accepts << "replicate,iteration,k_from,k_to,alpha,accepted,burnin_flag\n";

  for (const auto& s : replicate.states) {
    states << replicate.replicate << ',' << s.iteration << ','
           << s.model_index << ',' << fmt(s.log_likelihood) << ','
           << fmt(s.log_prior) << ',' << fmt(s.deviance) << '\n';
    for (std::size_t p = 0; p < s.params.size(); ++p) {
      const auto [name, index] = namer(s.model_index, p);
      params << replicate.replicate << ',' << s.iteration << ',' << name << ','
             << index << ',' << fmt(s.params[p]) << '\n';
    }
  }
  for (const auto& a : replicate.acceptances) {
    accepts << replicate.replicate << ',' << a.iteration << ',' << a.from_index
            << ',' << a.to_index << ',' << fmt(a.alpha) << ','
            << (a.accepted ? 1 : 0) << ',' << (a.burnin ? 1 : 0) << '\n';
  }
}

ReplicateTrace read_replicate(const std::filesystem::path& states_path,
                              const std::filesystem::path& params_path,
                              const std::filesystem::path& accepts_path) {
  ReplicateTrace replicate;

  {
    auto in = open_or_throw(states_path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 6)
        throw std::runtime_error("trace_io: bad state row in " +
                                 states_path.string());
      StateRecord s;
      replicate.replicate = std::stoi(f[0]);
      s.iteration = std::stol(f[1]);
      s.model_index = std::stoi(f[2]);
      s.log_likelihood = parse_double(f[3]);
      s.log_prior = parse_double(f[4]);
      s.deviance = parse_double(f[5]);
      replicate.states.push_back(std::move(s));
    }
  }
  {
    auto in = open_or_throw(params_path);
    std::string line;
    std::getline(in, line);
    std::map<long, std::size_t> by_iteration;
    for (std::size_t i = 0; i < replicate.states.size(); ++i)
      by_iteration[replicate.states[i].iteration] = i;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 5)
        throw std::runtime_error("trace_io: bad param row in " +
                                 params_path.string());
      const long iteration = std::stol(f[1]);
      auto it = by_iteration.find(iteration);
      if (it == by_iteration.end())
        throw std::runtime_error(
            "trace_io: param row for unknown iteration in " +
            params_path.string());
      replicate.states[it->second].params.push_back(parse_double(f[4]));
    }
  }
  {
    auto in = open_or_throw(accepts_path);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 7)
        throw std::runtime_error("trace_io: bad acceptance row in " +
                                 accepts_path.string());
      AcceptanceRecord a;
      a.iteration = std::stol(f[1]);
      a.from_index = std::stoi(f[2]);
      a.to_index = std::stoi(f[3]);
      a.alpha = parse_double(f[4]);
      a.accepted = f[5] == "1";
      a.burnin = f[6] == "1";
      replicate.acceptances.push_back(a);
    }
  }
  return replicate;
}

std::filesystem::path states_file(const std::filesystem::path& dir, int r) {
  return dir / ("states_r" + std::to_string(r) + ".csv");
}
std::filesystem::path params_file(const std::filesystem::path& dir, int r) {
  return dir / ("params_r" + std::to_string(r) + ".csv");
}
std::filesystem::path accepts_file(const std::filesystem::path& dir, int r) {
  return dir / ("accepts_r" + std::to_string(r) + ".csv");
}

void write_trace(const Trace& trace, const std::filesystem::path& dir,
                 const ParamNamer& namer) {
  std::filesystem::create_directories(dir);
  for (const auto& replicate : trace.replicates)
    write_replicate(replicate, states_file(dir, replicate.replicate),
                    params_file(dir, replicate.replicate),
                    accepts_file(dir, replicate.replicate), namer);
}

Trace read_trace(const std::filesystem::path& dir) {
  Trace trace;
  for (int r = 0;; ++r) {
    const auto states = states_file(dir, r);
    if (!std::filesystem::exists(states)) break;
    trace.replicates.push_back(
        read_replicate(states, params_file(dir, r), accepts_file(dir, r)));
  }
  if (trace.replicates.empty())
    throw std::runtime_error("trace_io: no trace files under " + dir.string());
  return trace;
}

std::vector<double> read_values_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    values.push_back(parse_double(line));
  }
  return values;
}

EventData read_event_file(const std::filesystem::path& path) {
  const auto values = read_values_file(path);
  if (values.empty())
    throw std::runtime_error("trace_io: event file needs a horizon header");
  EventData data;
  data.horizon = values[0];
  data.events.assign(values.begin() + 1, values.end());
  std::sort(data.events.begin(), data.events.end());
  return data;
}

void write_values_file(const std::filesystem::path& path,
                       std::span<const double> values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("trace_io: cannot open " + path.string());
  for (double v : values) out << fmt(v) << '\n';
}

void write_event_file(const std::filesystem::path& path,
                      const EventData& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("trace_io: cannot open " + path.string());
  out << "# horizon, then one event time per line\n";
  out << fmt(data.horizon) << '\n';
  for (double v : data.events) out << fmt(v) << '\n';
}

}  // namespace rjmcmc::io
