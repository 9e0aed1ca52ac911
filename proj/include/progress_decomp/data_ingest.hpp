#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "progress_decomp/types.hpp"

namespace progress {

/// Source column names for the five required fields. A flat key-value config
/// file may remap these; defaults match the canonical schema.
struct ColumnMap {
  std::string name = "name";
  std::string year = "year";
  std::string compute = "compute_flop";
  std::string data = "dataset_size";
  std::string accuracy = "top1_accuracy";
};

/// Parses CSV text into records. Requires a header row naming the five
/// mapped columns; extra columns are ignored. Throws MissingColumn,
/// MalformedValue (with row index), or DomainViolation.
std::vector<ModelRecord> parse_records(std::string_view csv_text,
                                       const ColumnMap& columns = {});

/// Validates one record against the domain invariants; throws
/// DomainViolation naming the offending field.
void validate_record(const ModelRecord& record);

/// Maps a valid record into the model's coordinate system.
NormalizedRecord normalize(const ModelRecord& record,
                           const NormConstants& refs = {});

/// Recovers the raw fields from a normalized record (name is not stored).
ModelRecord denormalize(const NormalizedRecord& record,
                        const NormConstants& refs = {},
                        const std::string& name = "");

/// Normalizes records in input order and stamps the content digest of the
/// canonical serialized form. Throws EmptyDataset.
Dataset build_dataset(const std::vector<ModelRecord>& records,
                      const NormConstants& refs = {});

/// Canonical CSV serialization (shortest round-trip decimals); the inverse
/// of parse_records for the five required columns.
std::string serialize_records(const std::vector<ModelRecord>& records);

/// Reads a CSV file and builds the dataset in one step.
Dataset load_dataset(const std::string& path, const ColumnMap& columns = {},
                     const NormConstants& refs = {});

}  // namespace progress
