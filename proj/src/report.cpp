#include "cdyn/report.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include "cdyn/error.hpp"

namespace cdyn {

std::string config_hash(const Json& parameters) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : parameters.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json make_report(const std::string& command, const Json& parameters, const Json& results,
                 const std::vector<std::string>& anomalies) {
  return Json{{"command", command},
              {"parameters", parameters},
              {"results", results},
              {"anomalies", anomalies},
              {"version", kVersion},
              {"config_hash", config_hash(parameters)}};
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

std::string cycles_csv(const std::vector<CycleEntry>& cycles) {
  std::string out = "word,cycle,length\n";
  for (const auto& c : cycles) {
    std::string word;
    for (const auto s : c.word.symbols) word += (word.empty() ? "" : " ") + std::to_string(s);
    std::string cycle;
    for (const auto& x : c.cycle) cycle += (cycle.empty() ? "" : " ") + to_dec(x);
    out += word + "," + cycle + "," + std::to_string(c.cycle.size()) + "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    throw Error(ErrorCode::Io, "cannot write " + path);
  }
}

}  // namespace cdyn
