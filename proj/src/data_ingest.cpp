#include "progress_decomp/data_ingest.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "progress_decomp/errors.hpp"
#include "progress_decomp/math_util.hpp"
#include "progress_decomp/sha256.hpp"

namespace progress {
namespace {

constexpr double kYearMin = 1985.0;
constexpr double kYearMax = 2035.0;
constexpr double kAccuracyEps = 1e-12;  // ingestion guard for the logit

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t row,
                    const std::string& column) {
  std::string t = trim(cell);
  if (t.empty()) {
    throw Error(ErrorCode::MalformedValue,
                "row " + std::to_string(row) + ": empty value in column '" +
                    column + "'");
  }
  errno = 0;
  char* end = nullptr;
  double value = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(value)) {
    throw Error(ErrorCode::MalformedValue,
                "row " + std::to_string(row) + ": non-numeric value '" + t +
                    "' in column '" + column + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void validate_record(const ModelRecord& r) {
  if (!(r.accuracy > kAccuracyEps) || !(r.accuracy < 1.0 - kAccuracyEps)) {
    throw Error(ErrorCode::DomainViolation,
                "record '" + r.name + "': accuracy must lie strictly in (0,1)");
  }
  if (!(r.compute > 0.0) || !std::isfinite(r.compute)) {
    throw Error(ErrorCode::DomainViolation,
                "record '" + r.name + "': compute must be > 0");
  }
  if (!(r.data > 0.0) || !std::isfinite(r.data)) {
    throw Error(ErrorCode::DomainViolation,
                "record '" + r.name + "': data must be > 0");
  }
  if (!(r.year >= kYearMin) || !(r.year <= kYearMax)) {
    throw Error(ErrorCode::DomainViolation,
                "record '" + r.name + "': year outside [1985, 2035]");
  }
}

std::vector<ModelRecord> parse_records(std::string_view csv_text,
                                       const ColumnMap& columns) {
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start <= csv_text.size()) {
      std::size_t nl = csv_text.find('\n', start);
      if (nl == std::string_view::npos) {
        lines.emplace_back(csv_text.substr(start));
        break;
      }
      lines.emplace_back(csv_text.substr(start, nl - start));
      start = nl + 1;
    }
  }
  // Strip a UTF-8 BOM if present.
  if (!lines.empty() && lines[0].size() >= 3 &&
      lines[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
    lines[0].erase(0, 3);
  }
  if (lines.empty() || trim(lines[0]).empty()) {
    throw Error(ErrorCode::MissingColumn, "input has no header row");
  }

  auto header = split_csv_line(lines[0]);
  for (auto& h : header) h = trim(h);
  auto column_index = [&](const std::string& wanted) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == wanted) return i;
    }
    throw Error(ErrorCode::MissingColumn,
                "header lacks required column '" + wanted + "'");
  };
  std::size_t ci_name = column_index(columns.name);
  std::size_t ci_year = column_index(columns.year);
  std::size_t ci_compute = column_index(columns.compute);
  std::size_t ci_data = column_index(columns.data);
  std::size_t ci_accuracy = column_index(columns.accuracy);

  std::vector<ModelRecord> out;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (trim(lines[row]).empty()) continue;
    auto fields = split_csv_line(lines[row]);
    std::size_t needed = std::max({ci_name, ci_year, ci_compute, ci_data,
                                   ci_accuracy});
    if (fields.size() <= needed) {
      throw Error(ErrorCode::MalformedValue,
                  "row " + std::to_string(row) + ": expected at least " +
                      std::to_string(needed + 1) + " fields");
    }
    ModelRecord r;
    r.name = trim(fields[ci_name]);
    r.year = parse_number(fields[ci_year], row, columns.year);
    r.compute = parse_number(fields[ci_compute], row, columns.compute);
    r.data = parse_number(fields[ci_data], row, columns.data);
    r.accuracy = parse_number(fields[ci_accuracy], row, columns.accuracy);
    validate_record(r);
    out.push_back(std::move(r));
  }
  return out;
}

NormalizedRecord normalize(const ModelRecord& r, const NormConstants& refs) {
  NormalizedRecord n;
  n.dyear = r.year - refs.reference_year;
  n.log_c = std::log(r.compute / refs.reference_compute);
  n.log_d = std::log(r.data / refs.reference_data);
  n.logit_p = logit(r.accuracy);
  return n;
}

ModelRecord denormalize(const NormalizedRecord& n, const NormConstants& refs,
                        const std::string& name) {
  ModelRecord r;
  r.name = name;
  r.year = n.dyear + refs.reference_year;
  r.compute = std::exp(n.log_c) * refs.reference_compute;
  r.data = std::exp(n.log_d) * refs.reference_data;
  r.accuracy = sigmoid(n.logit_p);
  return r;
}

std::string serialize_records(const std::vector<ModelRecord>& records) {
  std::string out = "name,year,compute_flop,dataset_size,top1_accuracy\n";
  for (const auto& r : records) {
    std::string name = r.name;
    if (name.find(',') != std::string::npos ||
        name.find('"') != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : name) {
        if (ch == '"') quoted += "\"\"";
        else quoted.push_back(ch);
      }
      quoted += "\"";
      name = quoted;
    }
    out += name;
    out.push_back(',');
    out += format_double(r.year);
    out.push_back(',');
    out += format_double(r.compute);
    out.push_back(',');
    out += format_double(r.data);
    out.push_back(',');
    out += format_double(r.accuracy);
    out.push_back('\n');
  }
  return out;
}

Dataset build_dataset(const std::vector<ModelRecord>& records,
                      const NormConstants& refs) {
  if (records.empty()) {
    throw Error(ErrorCode::EmptyDataset, "dataset needs at least one record");
  }
  Dataset ds;
  ds.refs = refs;
  ds.names.reserve(records.size());
  ds.records.reserve(records.size());
  for (const auto& r : records) {
    validate_record(r);
    ds.names.push_back(r.name);
    ds.records.push_back(normalize(r, refs));
  }
  ds.source_hash = sha256_hex(serialize_records(records));
  return ds;
}

Dataset load_dataset(const std::string& path, const ColumnMap& columns,
                     const NormConstants& refs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MalformedValue, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return build_dataset(parse_records(buf.str(), columns), refs);
}

}  // namespace progress
