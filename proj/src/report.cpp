#include "bfsim/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace bfsim {

using nlohmann::json;

json report_to_json(const RunReport& report, const json& config,
                    const ValidationReport& validation, CostModelParams params) {
  const auto sim = estimate_time_by_level(report.ranks, report.records, params);
  auto sim_at = [&](std::uint32_t level, Phase phase) {
    const auto it = sim.find({static_cast<int>(level), phase});
    return it == sim.end() ? 0.0 : it->second;
  };

  json per_level = json::array();
  for (const auto& row : report.per_level) {
    per_level.push_back(json{
        {"level", row.level},
        {"frontier_count", row.frontier_count},
        {"bytes",
         {{"raw", row.raw_bytes},
          {"sparse", row.sparse_bytes},
          {"wah", row.wah_bytes},
          {"sent_total", row.sent_payload + row.sent_overhead},
          {"sent_payload", row.sent_payload},
          {"sent_max_rank", row.sent_max_rank},
          {"sent_per_rank", row.sent_per_rank},
          {"reduce_total", row.reduce_bytes}}},
        {"C_i", row.compression_ratio > 0 ? json(row.compression_ratio)
                                          : json(nullptr)},
        {"messages", row.messages},
        {"phase_sim_s",
         {{phase_name(Phase::reducing), sim_at(row.level, Phase::reducing)},
          {phase_name(Phase::communication),
           sim_at(row.level, Phase::communication)}}},
        {"phase_wall_s",
         {{"traversing", row.wall.traversing},
          {"reducing", row.wall.reducing},
          {"communication", row.wall.communication},
          {"compression_sieve", row.wall.compression_sieve}}},
    });
  }

  std::uint64_t frontier_total = 0, raw_total = 0, sparse_total = 0, wah_total = 0;
  for (const auto& row : report.per_level) {
    frontier_total += row.frontier_count;
    raw_total += row.raw_bytes;
    sparse_total += row.sparse_bytes;
    wah_total += row.wah_bytes;
  }

  json totals{
      {"d", report.d},
      {"levels_executed", report.per_level.size()},
      {"frontier_total", frontier_total},
      {"bytes",
       {{"raw", raw_total},
        {"sparse", sparse_total},
        {"wah", wah_total},
        {"sent_total", report.comm_payload_total + report.comm_overhead_total},
        {"sent_payload", report.comm_payload_total},
        {"reduce_total", report.reduce_total},
        {"init_total", report.init_payload + report.init_overhead}}},
      {"volume_max_rank", report.volume_max_rank},
      {"volume_per_rank", report.volume_per_rank},
      {"C", report.alg == Algorithm::wah && report.compression_factor
                ? json(*report.compression_factor)
                : json(nullptr)},
      {"C_prime", report.alg == Algorithm::dir_wah && report.compression_factor
                      ? json(*report.compression_factor)
                      : json(nullptr)},
      {"m", report.m},
      {"teps", report.teps},
      {"sim_total_s",
       estimate_time_total(report.ranks, report.records, params)},
      {"wall_total_s", report.wall_total_s},
  };

  json out{
      {"config", config},
      {"per_level", per_level},
      {"totals", totals},
      {"validation",
       {{"passed", validation.passed}, {"errors", validation.errors}}},
  };
  return out;
}

std::string report_to_csv(const json& report_json) {
  std::ostringstream os;
  os << "level,frontier_count,raw_bytes,sparse_bytes,wah_bytes,sent_total,"
        "sent_payload,sent_max_rank,reduce_total,messages,sim_reducing_s,"
        "sim_communication_s,wall_traversing_s,wall_reducing_s,"
        "wall_communication_s,wall_compression_sieve_s\n";
  for (const auto& row : report_json.at("per_level")) {
    const auto& b = row.at("bytes");
    const auto& sim = row.at("phase_sim_s");
    const auto& wall = row.at("phase_wall_s");
    os << row.at("level").get<std::uint64_t>() << ','
       << row.at("frontier_count").get<std::uint64_t>() << ','
       << b.at("raw").get<std::uint64_t>() << ','
       << b.at("sparse").get<std::uint64_t>() << ','
       << b.at("wah").get<std::uint64_t>() << ','
       << b.at("sent_total").get<std::uint64_t>() << ','
       << b.at("sent_payload").get<std::uint64_t>() << ','
       << b.at("sent_max_rank").get<std::uint64_t>() << ','
       << b.at("reduce_total").get<std::uint64_t>() << ','
       << row.at("messages").get<std::uint64_t>() << ','
       << sim.at("reducing").get<double>() << ','
       << sim.at("communication").get<double>() << ','
       << wall.at("traversing").get<double>() << ','
       << wall.at("reducing").get<double>() << ','
       << wall.at("communication").get<double>() << ','
       << wall.at("compression_sieve").get<double>() << '\n';
  }
  return os.str();
}

std::string frontier_table(const RunReport& report) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %15s %15s %15s %15s\n", "level",
                "frontier", "bitmap_B", "sparse_B", "wah_B");
  os << buf;
  std::uint64_t ft = 0, rt = 0, st = 0, wt = 0;
  for (const auto& row : report.per_level) {
    std::snprintf(buf, sizeof buf,
                  "%-6u %15" PRIu64 " %15" PRIu64 " %15" PRIu64 " %15" PRIu64 "\n",
                  row.level, row.frontier_count, row.raw_bytes, row.sparse_bytes,
                  row.wah_bytes);
    os << buf;
    ft += row.frontier_count;
    rt += row.raw_bytes;
    st += row.sparse_bytes;
    wt += row.wah_bytes;
  }
  std::snprintf(buf, sizeof buf,
                "%-6s %15" PRIu64 " %15" PRIu64 " %15" PRIu64 " %15" PRIu64 "\n",
                "total", ft, rt, st, wt);
  os << buf;
  return os.str();
}

void strip_volatile(json& report_json) {
  if (report_json.contains("per_level")) {
    for (auto& row : report_json["per_level"]) row.erase("phase_wall_s");
  }
  if (report_json.contains("totals")) {
    report_json["totals"].erase("wall_total_s");
    report_json["totals"].erase("teps");
  }
}

std::string dump_report(const json& report_json) {
  return report_json.dump(2) + "\n";
}

}  // namespace bfsim
