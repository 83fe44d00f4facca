#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "srgg/bignet.hpp"
#include "srgg/mcmc.hpp"

namespace srgg {

// Writes through a temp file in the same directory plus rename, so an
// interrupted run never leaves a partial artifact behind.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

// FNV-1a 64 over the raw file bytes, hex-encoded.
std::string hash_file_hex(const std::string& path);

// --- learnt graphical model exports ---
std::string to_dot(const GraphicalModel& model);
std::string to_graphml(const GraphicalModel& model);
std::string graph_json(const GraphicalModel& model);
std::string to_edge_list_csv(const GraphicalModel& model);  // source,target,n_ij by label

// --- large-network exports ---
std::string to_edge_list_csv(const LargeNetwork& net);
std::string to_graphml(const LargeNetwork& net, const std::vector<std::string>& class_names = {});
std::string network_stats_json(const LargeNetwork& net, const ClassStats* class_stats = nullptr);

// --- chain trace round trip ---
// Columns: t, log_u, accept_corr, accept_graph, then g_i_j flattened i<j.
std::string trace_to_csv(const ChainTrace& trace);
ChainTrace trace_from_csv(const std::string& text);
ChainTrace load_trace_csv(const std::string& path);

// Deterministic categorical palette (hex RGB) for class coloring.
std::string class_color(std::size_t index, std::size_t count);

}  // namespace srgg
