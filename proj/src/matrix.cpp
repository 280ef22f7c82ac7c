#include "eflab/matrix.hpp"

namespace eflab {

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> hit(images_.size());
  for (std::size_t x : images_) {
    if (x >= images_.size() || hit[x])
      throw InvalidParameter("not a permutation of 0.." + std::to_string(images_.size()) + "-1");
    hit[x] = true;
  }
}

Permutation Permutation::identity(std::size_t m) {
  std::vector<std::size_t> id(m);
  std::iota(id.begin(), id.end(), std::size_t{0});
  return Permutation(std::move(id));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(images_.size());
  for (std::size_t j = 0; j < images_.size(); ++j) inv[images_[j]] = j;
  return Permutation(std::move(inv));
}

Permutation operator*(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree())
    throw InvalidParameter("cannot compose permutations of degrees " + std::to_string(p.degree()) +
                           " and " + std::to_string(q.degree()));
  std::vector<std::size_t> r(p.degree());
  for (std::size_t x = 0; x < r.size(); ++x) r[x] = p.images_[q.images_[x]];
  return Permutation(std::move(r));
}

Permutation random_permutation(std::size_t m, std::mt19937_64& rng) {
  std::vector<std::size_t> img(m);
  std::iota(img.begin(), img.end(), std::size_t{0});
  // Fisher-Yates with an explicit index draw, so results do not depend on
  // the standard library's shuffle.
  for (std::size_t i = m; i > 1; --i) std::swap(img[i - 1], img[rng() % i]);
  return Permutation(std::move(img));
}

std::size_t displacement(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree())
    throw InvalidParameter("degree mismatch: " + std::to_string(p.degree()) + " vs " +
                           std::to_string(q.degree()));
  std::size_t d = 0;
  for (std::size_t j = 0; j < p.degree(); ++j) d += p(j) != q(j);
  return d;
}

ComplexMatrix permutation_matrix(const Permutation& p) {
  ComplexMatrix a = ComplexMatrix::Zero(p.degree(), p.degree());
  for (std::size_t j = 0; j < p.degree(); ++j) a(p(j), j) = 1;
  return a;
}

nlohmann::json to_json(const ComplexMatrix& a) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array(), s = nlohmann::json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      r.push_back(a(i, j).real());
      s.push_back(a(i, j).imag());
    }
    re.push_back(r);
    im.push_back(s);
  }
  return {{"m", a.rows()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto m = j.at("m").get<std::size_t>();
    const auto& re = j.at("re");
    const nlohmann::json im = j.contains("im") ? j["im"] : nlohmann::json();
    if (re.size() != m || (!im.is_null() && im.size() != m))
      throw InvalidParameter("matrix JSON: expected " + std::to_string(m) + " rows");
    ComplexMatrix a(m, m);
    for (std::size_t r = 0; r < m; ++r) {
      if (re[r].size() != m || (!im.is_null() && im[r].size() != m))
        throw InvalidParameter("matrix JSON: row " + std::to_string(r) + " has the wrong length");
      for (std::size_t c = 0; c < m; ++c) {
        const double x = re[r][c].get<double>();
        const double y = im.is_null() ? 0.0 : im[r][c].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y))
          throw InvalidParameter("matrix JSON: non-finite entry");
        a(r, c) = {x, y};
      }
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed matrix JSON: ") + e.what());
  }
}

nlohmann::json to_json(const Permutation& p) { return p.images(); }

Permutation permutation_from_json(const nlohmann::json& j) {
  try {
    return Permutation(j.get<std::vector<std::size_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed permutation JSON: ") + e.what());
  }
}

}  // namespace eflab
