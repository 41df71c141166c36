#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"

namespace slab {

// One sweep measurement. All fields are reproducible from (config, seed);
// runtime_ms is 0 unless timing was explicitly enabled (wall time is the one
// quantity that cannot honor the byte-identical-output contract).
struct QuotientRecord {
  int n = 0;
  int d = 0;
  std::int64_t lambda = 0;
  double delta = 0.0;
  int K = 0;
  int ell = 0;
  std::string ensemble;
  std::int64_t field_id = 0;
  double quotient = 0.0;
  double l2_norm = 0.0;
  double high_volume = 0.0;
  std::int64_t nx = 0;
  std::int64_t nt = 0;
  std::int64_t runtime_ms = 0;
};

enum class RecordFormat { csv, jsonl };

RecordFormat parse_format(const std::string& name);

inline constexpr const char* kRecordHeader =
    "n,d,lambda,delta,K,ell,ensemble,field_id,quotient,l2_norm,high_volume,nx,nt,"
    "runtime_ms";

// Doubles are written with 17 significant digits so read-back is exact.
void emit(std::span<const QuotientRecord> records, const std::string& path,
          RecordFormat format);
std::string render_records(std::span<const QuotientRecord> records,
                           RecordFormat format);

std::vector<QuotientRecord> read_records_csv(const std::string& path);

}  // namespace slab
