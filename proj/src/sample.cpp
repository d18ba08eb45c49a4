#include "fwg/sample.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fwg {

void WeightedSample::validate() const {
  if (points.rows() == 0) throw InvalidInput("sample: no points");
  if (weights.size() != points.rows())
    throw InvalidInput("sample: weight count does not match point count");
  if (!points.allFinite() || !weights.allFinite())
    throw InvalidInput("sample: non-finite entries");
  for (int i = 0; i < weights.size(); ++i)
    if (weights[i] <= 0.0)
      throw InvalidInput("sample: weights must be strictly positive");
}

WeightedSample WeightedSample::with_point(const Vector& e, double w) const {
  if (e.size() != dim()) throw InvalidInput("sample: dimension mismatch");
  WeightedSample out;
  out.points.resize(size() + 1, dim());
  out.points.topRows(size()) = points;
  out.points.row(size()) = e.transpose();
  out.weights.resize(size() + 1);
  out.weights.head(size()) = weights;
  out.weights[size()] = w;
  return out;
}

WeightedSample WeightedSample::translated(const Vector& t) const {
  WeightedSample out = *this;
  out.points.rowwise() += t.transpose();
  return out;
}

WeightedSample WeightedSample::scaled_weights(double lambda) const {
  WeightedSample out = *this;
  out.weights *= lambda;
  return out;
}

double WeightedSample::diameter() const {
  double d = 0.0;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      d = std::max(d, (points.row(i) - points.row(j)).norm());
  return d;
}

WeightedSample WeightedSample::from_rows(
    std::initializer_list<std::initializer_list<double>> pts,
    std::initializer_list<double> ws) {
  WeightedSample s;
  s.points.resize(static_cast<Eigen::Index>(pts.size()),
                  static_cast<Eigen::Index>(pts.begin()->size()));
  int i = 0;
  for (const auto& row : pts) {
    int j = 0;
    for (double x : row) s.points(i, j++) = x;
    ++i;
  }
  s.weights.resize(static_cast<Eigen::Index>(ws.size()));
  i = 0;
  for (double w : ws) s.weights[i++] = w;
  s.validate();
  return s;
}

WeightedSample merge_coincident(const WeightedSample& s, double eps) {
  std::vector<int> rep;
  std::vector<double> w;
  for (int i = 0; i < s.size(); ++i) {
    bool merged = false;
    for (size_t k = 0; k < rep.size() && !merged; ++k) {
      if ((s.points.row(i) - s.points.row(rep[k])).norm() <= eps) {
        w[k] += s.weights[i];
        merged = true;
      }
    }
    if (!merged) {
      rep.push_back(i);
      w.push_back(s.weights[i]);
    }
  }
  WeightedSample out;
  out.points.resize(static_cast<int>(rep.size()), s.dim());
  out.weights.resize(static_cast<int>(rep.size()));
  for (size_t k = 0; k < rep.size(); ++k) {
    out.points.row(static_cast<int>(k)) = s.points.row(rep[k]);
    out.weights[static_cast<int>(k)] = w[k];
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) {
    // trim
    size_t a = cur.find_first_not_of(" \t\r");
    size_t b = cur.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cur.substr(a, b - a + 1));
  }
  return out;
}

double parse_number(const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw InvalidInput("sample: malformed number '" + s + "'");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("sample: malformed number '" + s + "'");
  }
}

}  // namespace

WeightedSample sample_from_csv_text(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw InvalidInput("sample: empty CSV");
  auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "weight")
    throw InvalidInput("sample: CSV header must be x1,...,xd,weight");
  const int d = static_cast<int>(header.size()) - 1;
  for (int i = 0; i < d; ++i)
    if (header[i] != "x" + std::to_string(i + 1))
      throw InvalidInput("sample: CSV header must be x1,...,xd,weight");

  std::vector<std::vector<double>> rows;
  while (std::getline(ss, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != d + 1)
      throw InvalidInput("sample: CSV row has wrong column count");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c));
    rows.push_back(row);
  }
  if (rows.empty()) throw InvalidInput("sample: no data rows");
  WeightedSample s;
  s.points.resize(static_cast<int>(rows.size()), d);
  s.weights.resize(static_cast<int>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < d; ++j) s.points(static_cast<int>(i), j) = rows[i][j];
    s.weights[static_cast<int>(i)] = rows[i][d];
  }
  s.validate();
  return s;
}

WeightedSample sample_from_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("sample: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return sample_from_csv_text(ss.str());
}

std::string sample_to_csv_text(const WeightedSample& s) {
  std::string out;
  for (int j = 0; j < s.dim(); ++j) out += "x" + std::to_string(j + 1) + ",";
  out += "weight\n";
  for (int i = 0; i < s.size(); ++i) {
    for (int j = 0; j < s.dim(); ++j) out += fmt_sig(s.points(i, j)) + ",";
    out += fmt_sig(s.weights[i]) + "\n";
  }
  return out;
}

}  // namespace fwg
