// Copyright 2026 The lef Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "oracle/naive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oracle {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(s);
}

Neighbors knn(const Points& points, std::size_t k) {
  const std::size_t m = points.size();
  Neighbors out;
  out.ids.resize(m);
  out.dists.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) all.push_back({distance(points[i], points[j]), j});
    }
    std::sort(all.begin(), all.end());
    for (std::size_t r = 0; r < k; ++r) {
      out.ids[i].push_back(all[r].second);
      out.dists[i].push_back(all[r].first);
    }
  }
  return out;
}

std::vector<double> knn_score(const Points& points, std::size_t k) {
  const auto nn = knn(points, k);
  std::vector<double> s;
  for (const auto& d : nn.dists) s.push_back(d[k - 1]);
  return s;
}

std::vector<double> knnw_score(const Points& points, std::size_t k) {
  const auto nn = knn(points, k);
  std::vector<double> s;
  for (const auto& d : nn.dists) {
    double t = 0.0;
    for (double v : d) t += v;
    s.push_back(t);
  }
  return s;
}

std::vector<double> odin_score(const Points& points, std::size_t k) {
  const auto nn = knn(points, k);
  std::vector<double> s(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (std::find(nn.ids[j].begin(), nn.ids[j].end(), i) != nn.ids[j].end()) s[i] += 1.0;
    }
  }
  return s;
}

std::vector<double> lof_score(const Points& points, std::size_t k) {
  const auto nn = knn(points, k);
  const std::size_t m = points.size();
  std::vector<double> lrd(m);
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t j = nn.ids[i][r];
      const double kdist_j = nn.dists[j][k - 1];
      sum += std::max(distance(points[i], points[j]), kdist_j);
    }
    lrd[i] = k / sum;
  }
  std::vector<double> s(m);
  for (std::size_t i = 0; i < m; ++i) {
    double ratio = 0.0;
    for (std::size_t j : nn.ids[i]) ratio += lrd[j] / lrd[i];
    s[i] = ratio / k;
  }
  return s;
}

std::vector<double> ldof_score(const Points& points, std::size_t k) {
  const auto nn = knn(points, k);
  std::vector<double> s;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double outer = 0.0;
    for (std::size_t j : nn.ids[i]) outer += distance(points[i], points[j]);
    double inner = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a : nn.ids[i]) {
      for (std::size_t b : nn.ids[i]) {
        if (a == b) continue;
        inner += distance(points[a], points[b]);
        ++pairs;
      }
    }
    s.push_back((outer / k) / (inner / pairs));
  }
  return s;
}

DumpedGraph parse_dump(const std::string& triples, const std::string& sidecar, std::size_t points) {
  DumpedGraph g;
  g.weight.assign(points, std::vector<double>(points, 0.0));
  g.sigma.assign(points, 0.0);
  g.rho.assign(points, 0.0);

  std::istringstream t(triples);
  std::string line;
  while (std::getline(t, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream h(line);
      std::string tok;
      while (h >> tok) {
        if (tok.rfind("kind=", 0) == 0) g.kind = tok.substr(5);
        if (tok.rfind("k=", 0) == 0) g.k = std::stoul(tok.substr(2));
        if (tok.rfind("normalized=", 0) == 0) g.normalized = tok.substr(11) == "1";
      }
      continue;
    }
    std::istringstream row(line);
    std::size_t i = 0;
    std::size_t j = 0;
    std::string w;
    row >> i >> j >> w;
    g.weight[i][j] = std::strtod(w.c_str(), nullptr);
  }
  std::istringstream s(sidecar);
  while (std::getline(s, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::size_t i = 0;
    std::string sigma;
    std::string rho;
    row >> i >> sigma >> rho;
    g.sigma[i] = std::strtod(sigma.c_str(), nullptr);
    g.rho[i] = std::strtod(rho.c_str(), nullptr);
  }
  if (g.kind.empty() || g.k == 0) throw std::runtime_error("dump header missing");
  return g;
}

double direct_weight(const Points& points, const DumpedGraph& graph, std::size_t j, std::size_t i) {
  const auto nn = knn(points, graph.k);
  const double d = distance(points[j], points[i]);
  const double sigma = graph.sigma[j];
  if (graph.kind == "bh_sne") {
    // Log-sum-exp: subtract the largest exponent (nearest neighbor) first.
    const double d0 = nn.dists[j][0];
    double z = 0.0;
    for (double dl : nn.dists[j]) z += std::exp(-(dl * dl - d0 * d0) / (2.0 * sigma * sigma));
    return std::exp(-(d * d - d0 * d0) / (2.0 * sigma * sigma)) / z;
  }
  const double rho = nn.dists[j][0];
  const double w = std::exp(-std::max(0.0, d - rho) / sigma);
  return graph.normalized ? w / std::log2(static_cast<double>(graph.k)) : w;
}

std::vector<double> lef_score(const Points& points, const DumpedGraph& graph, bool sparse) {
  const auto nn = knn(points, graph.k);
  std::vector<double> s(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> w;
    for (std::size_t j : nn.ids[i]) {
      w.push_back(sparse ? graph.weight[j][i] : direct_weight(points, graph, j, i));
    }
    double total = 0.0;
    for (double v : w) total += v;
    if (total == 0.0) continue;
    double h = 0.0;
    for (double v : w) {
      const double p = v / total;
      if (p > 0.0) h -= p * std::log2(p);  // 0 log 0 = 0
    }
    s[i] = total / graph.k * h;
  }
  return s;
}

std::vector<double> sos_score(const DumpedGraph& graph) {
  const std::size_t m = graph.weight.size();
  std::vector<double> s(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i && graph.weight[j][i] > 0.0) s[i] *= 1.0 - graph.weight[j][i];
    }
  }
  return s;
}

double auc(const std::vector<double>& outlierness, std::size_t outlier) {
  double total = 0.0;
  for (std::size_t i = 0; i < outlierness.size(); ++i) {
    if (i == outlier) continue;
    if (outlierness[outlier] > outlierness[i]) total += 1.0;
    if (outlierness[outlier] == outlierness[i]) total += 0.5;
  }
  return total / static_cast<double>(outlierness.size() - 1);
}

}  // namespace oracle
