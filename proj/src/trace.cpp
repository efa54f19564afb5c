#include "faasim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace faasim {

const char* track_name(Track t) {
  switch (t) {
    case Track::kRegular: return "regular";
    case Track::kEmergency: return "emergency";
    case Track::kRejected: return "rejected";
  }
  return "?";
}

std::int32_t Workload::function_index(const std::string& id) const {
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (functions[i].id == id) return static_cast<std::int32_t>(i);
  }
  return -1;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::int64_t parse_int(const std::string& s, const std::string& path, int line_no,
                       const char* field) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw TraceError(path + ":" + std::to_string(line_no) + ": bad " + field +
                     " value '" + s + "'");
  }
  return v;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open " + path);
  return in;
}

}  // namespace

std::vector<FunctionSpec> load_manifest(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int line_no = 0;
  std::vector<FunctionSpec> specs;
  std::unordered_map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (split_csv_line(line) !=
          std::vector<std::string>{"function_id", "memory_mb", "target_concurrency"}) {
        throw TraceError(path + ":1: expected header "
                         "function_id,memory_mb,target_concurrency");
      }
      continue;
    }
    auto cols = split_csv_line(line);
    if (cols.size() != 3) {
      throw TraceError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    FunctionSpec f;
    f.id = cols[0];
    f.memory_mb = static_cast<int>(parse_int(cols[1], path, line_no, "memory_mb"));
    f.target_concurrency =
        static_cast<int>(parse_int(cols[2], path, line_no, "target_concurrency"));
    if (f.memory_mb <= 0) {
      throw TraceError(path + ":" + std::to_string(line_no) + ": memory_mb must be > 0");
    }
    if (f.target_concurrency < 1) {
      throw TraceError(path + ":" + std::to_string(line_no) +
                       ": target_concurrency must be >= 1");
    }
    if (!seen.emplace(f.id, line_no).second) {
      throw TraceError(path + ":" + std::to_string(line_no) + ": duplicate function id '" +
                       f.id + "'");
    }
    specs.push_back(std::move(f));
  }
  return specs;
}

Workload load_trace(const std::string& trace_path, const std::string& manifest_path) {
  Workload w;
  w.functions = load_manifest(manifest_path);
  std::unordered_map<std::string, std::int32_t> index;
  for (std::size_t i = 0; i < w.functions.size(); ++i) {
    index[w.functions[i].id] = static_cast<std::int32_t>(i);
  }

  std::ifstream in = open_or_throw(trace_path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (split_csv_line(line) !=
          std::vector<std::string>{"function_id", "arrival_us", "duration_us"}) {
        throw TraceError(trace_path + ":1: expected header "
                         "function_id,arrival_us,duration_us");
      }
      continue;
    }
    auto cols = split_csv_line(line);
    if (cols.size() != 3) {
      throw TraceError(trace_path + ":" + std::to_string(line_no) +
                       ": expected 3 columns");
    }
    auto it = index.find(cols[0]);
    if (it == index.end()) {
      throw TraceError(trace_path + ":" + std::to_string(line_no) +
                       ": unknown function id '" + cols[0] + "'");
    }
    TraceEvent e;
    e.function = it->second;
    e.arrival = parse_int(cols[1], trace_path, line_no, "arrival_us");
    e.duration = parse_int(cols[2], trace_path, line_no, "duration_us");
    if (e.arrival < 0) {
      throw TraceError(trace_path + ":" + std::to_string(line_no) +
                       ": arrival_us must be >= 0");
    }
    if (e.duration <= 0) {
      throw TraceError(trace_path + ":" + std::to_string(line_no) +
                       ": duration_us must be > 0");
    }
    w.events.push_back(e);
  }
  std::stable_sort(w.events.begin(), w.events.end(),
                   [](const TraceEvent& x, const TraceEvent& y) {
                     return x.arrival < y.arrival;
                   });
  return w;
}

void write_manifest(const Workload& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TraceError("cannot write " + path);
  out << "function_id,memory_mb,target_concurrency\n";
  for (const auto& f : w.functions) {
    out << f.id << ',' << f.memory_mb << ',' << f.target_concurrency << '\n';
  }
}

void write_trace(const Workload& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TraceError("cannot write " + path);
  out << "function_id,arrival_us,duration_us\n";
  for (const auto& e : w.events) {
    out << w.functions[e.function].id << ',' << e.arrival << ',' << e.duration << '\n';
  }
}

}  // namespace faasim
