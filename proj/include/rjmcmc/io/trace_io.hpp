#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rjmcmc/sampler.hpp"

namespace rjmcmc::io {

// Maps a flat parameter position to a (name, index) pair for the
// long-format parameter file; receives the model index of the state.
using ParamNamer =
    std::function<std::pair<std::string, int>(int model_index, std::size_t position)>;

ParamNamer mixture_param_namer();
ParamNamer ar_param_namer();
ParamNamer changepoint_param_namer();
ParamNamer generic_param_namer();  // ("theta", position)

// One replicate, three files:
//   states:  replicate,iteration,k,log_likelihood,log_prior,deviance
//   params:  replicate,iteration,name,index,value   (layout order)
//   accepts: replicate,iteration,k_from,k_to,alpha,accepted,burnin_flag
// Doubles are written with 17 significant digits so byte-identical
// round-trips are guaranteed.
void write_replicate(const ReplicateTrace& replicate,
                     const std::filesystem::path& states_path,
                     const std::filesystem::path& params_path,
                     const std::filesystem::path& accepts_path,
                     const ParamNamer& namer);

// Inverse of write_replicate; parameter vectors are reassembled in file
// order, which write_replicate emits in layout order.
ReplicateTrace read_replicate(const std::filesystem::path& states_path,
                              const std::filesystem::path& params_path,
                              const std::filesystem::path& accepts_path);

std::filesystem::path states_file(const std::filesystem::path& dir, int r);
std::filesystem::path params_file(const std::filesystem::path& dir, int r);
std::filesystem::path accepts_file(const std::filesystem::path& dir, int r);

void write_trace(const Trace& trace, const std::filesystem::path& dir,
                 const ParamNamer& namer);
Trace read_trace(const std::filesystem::path& dir);

// Dataset files. Mixture and AR: one value per line; blank lines and
// lines starting with '#' are ignored. Change-point: the first value line
// is the horizon, the rest are event times.
std::vector<double> read_values_file(const std::filesystem::path& path);
struct EventData {
  double horizon = 0.0;
  std::vector<double> events;  // sorted on load
};
EventData read_event_file(const std::filesystem::path& path);
void write_values_file(const std::filesystem::path& path,
                       std::span<const double> values);
void write_event_file(const std::filesystem::path& path, const EventData& data);

}  // namespace rjmcmc::io
