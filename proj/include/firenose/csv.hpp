#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firenose/dataset.hpp"

namespace firenose {

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Strict full-cell parse; nullopt on anything but a finite decimal number.
std::optional<double> parse_double(std::string_view cell);

std::vector<std::string> split_csv_line(std::string_view line);

// Dataset files: header `c_1,...,c_D,label`, one sample per line.
// Label strings map to dense ids in order of first appearance unless
// `known_classes` is given, in which case unknown labels are an error and
// ids follow the given order. A class literally named "NA" becomes the
// negative class.
LabeledDataset parse_dataset_csv(std::istream& in, const std::string& source = "<stream>",
                                 const std::vector<std::string>* known_classes = nullptr);
LabeledDataset read_dataset_csv(const std::filesystem::path& path,
                                const std::vector<std::string>* known_classes = nullptr);
void write_dataset_csv(const LabeledDataset& dataset, std::ostream& out);
void write_dataset_csv(const LabeledDataset& dataset, const std::filesystem::path& path);

// Recording files: a sidecar line `# class=<name> baseline=<v1;...;vS> [key=value ...]`
// followed by header `t,sensor_1,...,sensor_S` and one timestep per line,
// t in minutes. A missing baseline is estimated from the leading 5% of rows.
// The class name is resolved against (and appended to) `class_names`.
OdourRecording parse_recording_csv(std::istream& in, std::vector<std::string>& class_names,
                                   const std::string& source = "<stream>");
OdourRecording read_recording_csv(const std::filesystem::path& path, std::vector<std::string>& class_names);
void write_recording_csv(const OdourRecording& rec, const std::vector<std::string>& class_names, std::ostream& out);
void write_recording_csv(const OdourRecording& rec, const std::vector<std::string>& class_names,
                         const std::filesystem::path& path);

// All `*.csv` files of a directory in lexicographic filename order.
std::vector<OdourRecording> read_recording_dir(const std::filesystem::path& dir, std::vector<std::string>& class_names);

// Plain table writer used by the report emitters.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

}  // namespace firenose
