#include "pavinglab/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pavinglab/errors.hpp"

namespace pavinglab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string next_data_line(std::istream& in, const std::string& path) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '%') continue;
    return line;
  }
  throw IoError("matrix market: unexpected end of file in " + path);
}

}  // namespace

Mat read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("matrix market: cannot open " + path);

  std::string banner;
  if (!std::getline(in, banner)) {
    throw IoError("matrix market: empty file " + path);
  }
  std::istringstream hdr(banner);
  std::string magic, object, format, field, symmetry;
  hdr >> magic >> object >> format >> field >> symmetry;
  if (lower(magic) != "%%matrixmarket" || lower(object) != "matrix") {
    throw IoError("matrix market: bad banner in " + path);
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate") {
    throw IoError("matrix market: unsupported format '" + format + "'");
  }
  if (field != "real" && field != "complex" && field != "integer") {
    throw IoError("matrix market: unsupported field '" + field + "'");
  }
  if (symmetry != "general") {
    throw IoError("matrix market: only general symmetry supported");
  }

  std::istringstream size_line(next_data_line(in, path));
  long rows = 0, cols = 0, nnz = 0;
  if (format == "array") {
    if (!(size_line >> rows >> cols) || rows < 0 || cols < 0) {
      throw IoError("matrix market: bad size line in " + path);
    }
  } else {
    if (!(size_line >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
      throw IoError("matrix market: bad size line in " + path);
    }
  }

  Mat a = Mat::Zero(rows, cols);
  const bool complex_field = field == "complex";
  if (format == "array") {
    for (long j = 0; j < cols; ++j) {
      for (long i = 0; i < rows; ++i) {
        std::istringstream entry(next_data_line(in, path));
        double re = 0.0, im = 0.0;
        if (!(entry >> re) || (complex_field && !(entry >> im))) {
          throw IoError("matrix market: bad entry in " + path);
        }
        a(i, j) = Cplx(re, im);
      }
    }
  } else {
    for (long e = 0; e < nnz; ++e) {
      std::istringstream entry(next_data_line(in, path));
      long i = 0, j = 0;
      double re = 0.0, im = 0.0;
      if (!(entry >> i >> j >> re) || (complex_field && !(entry >> im))) {
        throw IoError("matrix market: bad entry in " + path);
      }
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw IoError("matrix market: index out of range in " + path);
      }
      a(i - 1, j - 1) = Cplx(re, im);
    }
  }
  return a;
}

void write_matrix_market(const std::string& path, const Mat& a,
                         bool coordinate) {
  std::ofstream out(path);
  if (!out) throw IoError("matrix market: cannot write " + path);
  if (coordinate) {
    long nnz = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (a(i, j) != Cplx(0.0, 0.0)) ++nnz;
      }
    }
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << a.rows() << " " << a.cols() << " " << nnz << "\n";
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const Cplx v = a(i, j);
        if (v == Cplx(0.0, 0.0)) continue;
        out << (i + 1) << " " << (j + 1) << " " << format_double(v.real())
            << " " << format_double(v.imag()) << "\n";
      }
    }
  } else {
    out << "%%MatrixMarket matrix array complex general\n";
    out << a.rows() << " " << a.cols() << "\n";
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        out << format_double(a(i, j).real()) << " "
            << format_double(a(i, j).imag()) << "\n";
      }
    }
  }
  if (!out) throw IoError("matrix market: write failed for " + path);
}

BlockOperator read_block_operator(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("manifest: cannot open " + manifest_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw IoError("manifest: bad JSON in " + manifest_path + ": " + e.what());
  }
  if (!doc.contains("blocks") || !doc["blocks"].is_array()) {
    throw IoError("manifest: missing 'blocks' array in " + manifest_path);
  }
  const fs::path base = fs::path(manifest_path).parent_path();
  std::vector<Mat> blocks;
  for (const auto& entry : doc["blocks"]) {
    if (!entry.contains("n") || !entry.contains("mm")) {
      throw IoError("manifest: block entries need 'n' and 'mm'");
    }
    const int n = entry["n"].get<int>();
    const fs::path mm = base / entry["mm"].get<std::string>();
    Mat block = read_matrix_market(mm.string());
    if (block.rows() != n || block.cols() != n) {
      throw IoError("manifest: block file " + mm.string() +
                    " does not match declared dimension");
    }
    blocks.push_back(std::move(block));
  }
  return BlockOperator(std::move(blocks));
}

void write_block_operator(const std::string& manifest_path,
                          const BlockOperator& op, bool coordinate) {
  const fs::path manifest(manifest_path);
  const fs::path base = manifest.parent_path();
  const std::string stem = manifest.stem().string();
  json doc;
  doc["blocks"] = json::array();
  for (int k = 0; k < op.block_count(); ++k) {
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_block%03d.mtx", k);
    const std::string name = stem + suffix;
    write_matrix_market((base / name).string(), op.block(k), coordinate);
    doc["blocks"].push_back(
        {{"n", static_cast<int>(op.block(k).rows())}, {"mm", name}});
  }
  std::ofstream out(manifest_path);
  if (!out) throw IoError("manifest: cannot write " + manifest_path);
  out << doc.dump(2) << "\n";
}

std::string partition_to_json(const PavingPartition& part) {
  json doc;
  doc["m"] = part.m;
  doc["colors"] = part.colors;
  return doc.dump();
}

PavingPartition partition_from_json(const std::string& text) {
  PavingPartition part;
  try {
    const json doc = json::parse(text);
    part.m = doc.at("m").get<int>();
    part.colors = doc.at("colors").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("partition: bad JSON: ") + e.what());
  }
  return part;
}

std::string permutation_set_to_json(const PermutationSet& ps) {
  json doc;
  doc["n"] = ps.n;
  json perms = json::array();
  for (const auto& p : ps.perms) {
    json images = json::array();
    for (int v : p) images.push_back(v + 1);  // 1-based on the wire
    perms.push_back(std::move(images));
  }
  doc["perms"] = std::move(perms);
  return doc.dump();
}

PermutationSet permutation_set_from_json(const std::string& text) {
  PermutationSet ps;
  try {
    const json doc = json::parse(text);
    ps.n = doc.at("n").get<int>();
    for (const auto& p : doc.at("perms")) {
      std::vector<int> images;
      for (const auto& v : p) images.push_back(v.get<int>() - 1);
      ps.perms.push_back(std::move(images));
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("permutation set: bad JSON: ") + e.what());
  }
  return ps;
}

}  // namespace pavinglab
