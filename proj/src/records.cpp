#include "records.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace slab {

RecordFormat parse_format(const std::string& name) {
  if (name == "csv") return RecordFormat::csv;
  if (name == "jsonl") return RecordFormat::jsonl;
  fail_config("unknown output format '" + name + "' (expected csv or jsonl)");
}

namespace {

std::string csv_row(const QuotientRecord& r) {
  std::ostringstream os;
  os << r.n << ',' << r.d << ',' << r.lambda << ',' << format_double(r.delta) << ','
     << r.K << ',' << r.ell << ',' << r.ensemble << ',' << r.field_id << ','
     << format_double(r.quotient) << ',' << format_double(r.l2_norm) << ','
     << format_double(r.high_volume) << ',' << r.nx << ',' << r.nt << ','
     << r.runtime_ms;
  return os.str();
}

nlohmann::json json_row(const QuotientRecord& r) {
  return nlohmann::json{{"n", r.n},
                        {"d", r.d},
                        {"lambda", r.lambda},
                        {"delta", r.delta},
                        {"K", r.K},
                        {"ell", r.ell},
                        {"ensemble", r.ensemble},
                        {"field_id", r.field_id},
                        {"quotient", r.quotient},
                        {"l2_norm", r.l2_norm},
                        {"high_volume", r.high_volume},
                        {"nx", r.nx},
                        {"nt", r.nt},
                        {"runtime_ms", r.runtime_ms}};
}

}  // namespace

std::string render_records(std::span<const QuotientRecord> records,
                           RecordFormat format) {
  std::ostringstream os;
  if (format == RecordFormat::csv) {
    os << kRecordHeader << '\n';
    for (const auto& r : records) os << csv_row(r) << '\n';
  } else {
    for (const auto& r : records) os << json_row(r).dump() << '\n';
  }
  return os.str();
}

void emit(std::span<const QuotientRecord> records, const std::string& path,
          RecordFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("emit: cannot open '" + path + "' for writing");
  out << render_records(records, format);
  out.flush();
  if (!out) fail_io("emit: write to '" + path + "' failed");
}

std::vector<QuotientRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("read_records_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail_io("read_records_csv: empty file " + path);
  if (line != kRecordHeader)
    fail_io("read_records_csv: unexpected header in " + path);
  std::vector<QuotientRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cols.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    cols.push_back(cur);
    if (cols.size() != 14) fail_io("read_records_csv: malformed row in " + path);
    QuotientRecord r;
    r.n = std::stoi(cols[0]);
    r.d = std::stoi(cols[1]);
    r.lambda = std::stoll(cols[2]);
    r.delta = std::stod(cols[3]);
    r.K = std::stoi(cols[4]);
    r.ell = std::stoi(cols[5]);
    r.ensemble = cols[6];
    r.field_id = std::stoll(cols[7]);
    r.quotient = std::stod(cols[8]);
    r.l2_norm = std::stod(cols[9]);
    r.high_volume = std::stod(cols[10]);
    r.nx = std::stoll(cols[11]);
    r.nt = std::stoll(cols[12]);
    r.runtime_ms = std::stoll(cols[13]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace slab
