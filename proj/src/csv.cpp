#include "firenose/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "firenose/error.hpp"

namespace firenose {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view cell) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.emplace_back(line.substr(start));
      break;
    }
    cells.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

namespace {

std::string trim(std::string s) {
  auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

LabeledDataset parse_dataset_csv(std::istream& in, const std::string& source,
                                 const std::vector<std::string>* known_classes) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (next_line(in, line, lineno)) {
    if (trim(line).empty() || line.front() == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw ParseError(source, lineno, "missing header");
  for (auto& h : header) h = trim(h);
  if (header.size() < 2 || header.back() != "label")
    throw ParseError(source, lineno, "header must list value columns followed by 'label'");
  const std::size_t dims = header.size() - 1;

  LabeledDataset ds;
  ds.column_names.assign(header.begin(), header.end() - 1);
  if (known_classes) ds.class_names = *known_classes;

  std::vector<double> values;
  while (next_line(in, line, lineno)) {
    if (trim(line).empty() || line.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError(source, lineno,
                       "expected " + std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
    for (std::size_t j = 0; j < dims; ++j) {
      auto v = parse_double(cells[j]);
      if (!v) throw ParseError(source, lineno, "non-numeric cell '" + cells[j] + "' in column " + header[j]);
      values.push_back(*v);
    }
    auto label = trim(cells.back());
    if (label.empty()) throw ParseError(source, lineno, "empty label");
    auto id = find_class(ds.class_names, label);
    if (!id) {
      if (known_classes) throw ParseError(source, lineno, "unknown label '" + label + "'");
      ds.class_names.push_back(label);
      id = static_cast<ClassId>(ds.class_names.size() - 1);
    }
    ds.labels.push_back(*id);
  }
  ds.rows = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(ds.labels.size()), static_cast<Eigen::Index>(dims));
  ds.negative_class = find_class(ds.class_names, "NA");
  return ds;
}

LabeledDataset read_dataset_csv(const fs::path& path, const std::vector<std::string>* known_classes) {
  auto in = open_in(path);
  return parse_dataset_csv(in, path.string(), known_classes);
}

void write_dataset_csv(const LabeledDataset& dataset, std::ostream& out) {
  dataset.validate();
  const auto d = dataset.dims();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!dataset.column_names.empty())
      out << dataset.column_names[static_cast<std::size_t>(j)];
    else
      out << "sensor_" << (j + 1);
    out << ',';
  }
  out << "label\n";
  for (Eigen::Index i = 0; i < dataset.rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out << format_double(dataset.rows(i, j)) << ',';
    out << dataset.class_names[static_cast<std::size_t>(dataset.labels[static_cast<std::size_t>(i)])] << '\n';
  }
}

void write_dataset_csv(const LabeledDataset& dataset, const fs::path& path) {
  auto out = open_out(path);
  write_dataset_csv(dataset, out);
}

OdourRecording parse_recording_csv(std::istream& in, std::vector<std::string>& class_names, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  OdourRecording rec;
  std::optional<std::string> class_name;
  std::vector<double> baseline;
  std::optional<double> sample_rate;

  std::vector<std::string> header;
  while (next_line(in, line, lineno)) {
    if (trim(line).empty()) continue;
    if (line.front() == '#') {
      std::istringstream tokens(line.substr(1));
      std::string tok;
      while (tokens >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(source, lineno, "sidecar token '" + tok + "' is not key=value");
        auto key = tok.substr(0, eq);
        auto val = tok.substr(eq + 1);
        if (key == "class") {
          class_name = val;
        } else if (key == "baseline") {
          std::size_t start = 0;
          while (start <= val.size()) {
            auto pos = val.find(';', start);
            auto cell = val.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
            auto v = parse_double(cell);
            if (!v) throw ParseError(source, lineno, "non-numeric baseline entry '" + cell + "'");
            baseline.push_back(*v);
            if (pos == std::string::npos) break;
            start = pos + 1;
          }
        } else if (key == "sample_rate") {
          sample_rate = parse_double(val);
          if (!sample_rate || *sample_rate <= 0.0) throw ParseError(source, lineno, "invalid sample_rate");
        } else {
          rec.metadata[key] = val;
        }
      }
      continue;
    }
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw ParseError(source, lineno, "missing header");
  for (auto& h : header) h = trim(h);
  if (header.size() < 2 || header.front() != "t")
    throw ParseError(source, lineno, "recording header must start with 't' followed by sensor columns");
  if (!class_name) throw ParseError(source, lineno, "missing '# class=<name>' sidecar line");
  const std::size_t sensors = header.size() - 1;

  std::vector<double> values;
  std::vector<double> times;
  std::size_t rows = 0;
  while (next_line(in, line, lineno)) {
    if (trim(line).empty() || line.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError(source, lineno,
                       "expected " + std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      auto v = parse_double(cells[j]);
      if (!v) throw ParseError(source, lineno, "non-numeric cell '" + cells[j] + "' in column " + header[j]);
      if (j == 0)
        times.push_back(*v);
      else
        values.push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(source, lineno, "recording has no timesteps");
  rec.values = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(sensors));
  if (baseline.empty()) {
    rec.baseline = estimate_baseline(rec.values);
  } else {
    if (baseline.size() != sensors)
      throw ParseError(source, 1, "baseline has " + std::to_string(baseline.size()) + " entries for " +
                                      std::to_string(sensors) + " sensors");
    rec.baseline = Eigen::Map<Vector>(baseline.data(), static_cast<Eigen::Index>(sensors));
  }
  if (sample_rate) {
    rec.sample_rate = *sample_rate;
  } else if (times.size() >= 2 && times[1] > times[0]) {
    rec.sample_rate = 1.0 / (times[1] - times[0]);
  }
  auto id = find_class(class_names, *class_name);
  if (!id) {
    class_names.push_back(*class_name);
    id = static_cast<ClassId>(class_names.size() - 1);
  }
  rec.class_id = *id;
  rec.validate();
  return rec;
}

OdourRecording read_recording_csv(const fs::path& path, std::vector<std::string>& class_names) {
  auto in = open_in(path);
  return parse_recording_csv(in, class_names, path.string());
}

void write_recording_csv(const OdourRecording& rec, const std::vector<std::string>& class_names, std::ostream& out) {
  rec.validate();
  out << "# class=" << class_names.at(static_cast<std::size_t>(rec.class_id)) << " baseline=";
  for (Eigen::Index j = 0; j < rec.baseline.size(); ++j) out << (j ? ";" : "") << format_double(rec.baseline(j));
  out << " sample_rate=" << format_double(rec.sample_rate);
  for (const auto& [k, v] : rec.metadata) {
    std::string val = v;
    std::replace(val.begin(), val.end(), ' ', '_');
    out << ' ' << k << '=' << val;
  }
  out << "\nt";
  for (Eigen::Index j = 0; j < rec.sensors(); ++j) out << ",sensor_" << (j + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < rec.timesteps(); ++i) {
    out << format_double(static_cast<double>(i) / rec.sample_rate);
    for (Eigen::Index j = 0; j < rec.sensors(); ++j) out << ',' << format_double(rec.values(i, j));
    out << '\n';
  }
}

void write_recording_csv(const OdourRecording& rec, const std::vector<std::string>& class_names, const fs::path& path) {
  auto out = open_out(path);
  write_recording_csv(rec, class_names, out);
}

std::vector<OdourRecording> read_recording_dir(const fs::path& dir, std::vector<std::string>& class_names) {
  if (!fs::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<OdourRecording> recs;
  recs.reserve(files.size());
  for (const auto& f : files) recs.push_back(read_recording_csv(f, class_names));
  return recs;
}

void write_table(const fs::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << '\n';
  }
}

}  // namespace firenose
