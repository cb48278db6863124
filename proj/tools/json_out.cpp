#include <cstdio>
#include <fstream>

#include "cli.hpp"
#include "json.hpp"

namespace vreach::cli {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_json(const RunRecord& rec) {
  std::string s = "{\"model\": " + nlohmann::json(rec.model).dump() + ", \"epsilon\": " + num(rec.epsilon) +
                  ", \"events\": [";
  for (std::size_t i = 0; i < rec.events.size(); ++i) {
    const auto& e = rec.events[i];
    s += i ? ",\n    " : "\n    ";
    s += "{\"elapsed_s\": " + num(e.elapsed_s) + ", \"p_lower\": " + num(e.p_lower) + ", \"p_upper\": " +
         num(e.p_upper) + ", \"cells_done\": " + std::to_string(e.cells_done) +
         ", \"cells_pending\": " + std::to_string(e.cells_pending) + "}";
  }
  s += rec.events.empty() ? "]" : "\n  ]";
  s += ", \"result\": {\"p_lower\": " + num(rec.result.p_lower) + ", \"p_upper\": " + num(rec.result.p_upper) +
       ", \"complete\": " + (rec.result.complete ? "true" : "false") + "}}\n";
  return s;
}

void emit_json(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << to_json(rec);
  if (!out) throw Error("write to " + path + " failed");
}

RunRecord parse_json(const std::string& text) {
  RunRecord rec;
  try {
    const auto j = nlohmann::json::parse(text);
    rec.model = j.at("model").get<std::string>();
    rec.epsilon = j.at("epsilon").get<double>();
    for (const auto& e : j.at("events")) {
      ProgressEvent ev;
      ev.elapsed_s = e.at("elapsed_s").get<double>();
      ev.p_lower = e.at("p_lower").get<double>();
      ev.p_upper = e.at("p_upper").get<double>();
      ev.cells_done = e.at("cells_done").get<long>();
      ev.cells_pending = e.at("cells_pending").get<long>();
      rec.events.push_back(ev);
    }
    const auto& r = j.at("result");
    rec.result.p_lower = r.at("p_lower").get<double>();
    rec.result.p_upper = r.at("p_upper").get<double>();
    rec.result.complete = r.at("complete").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed run record: ") + e.what());
  }
  return rec;
}

}  // namespace vreach::cli
