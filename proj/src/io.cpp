// SPDX-License-Identifier: Apache-2.0
#include "specseq/io.hpp"

#include <fstream>
#include <sstream>

#include "specseq/error.hpp"

namespace specseq {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> real_row(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

Vector complex_column(const Json& entry, Index d, const char* what) {
  Vector v = Vector::Zero(d);
  // [[re...], [im...]] or [re...]
  if (entry.is_array() && entry.size() == 2 && entry[0].is_array()) {
    const auto re = real_row(entry[0], what);
    const auto im = real_row(entry[1], what);
    if (static_cast<Index>(re.size()) != d || static_cast<Index>(im.size()) != d) {
      fail(std::string(what) + " entry has the wrong dimension");
    }
    for (Index i = 0; i < d; ++i) v(i) = Complex(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
    return v;
  }
  const auto re = real_row(entry, what);
  if (static_cast<Index>(re.size()) != d) fail(std::string(what) + " entry has the wrong dimension");
  for (Index i = 0; i < d; ++i) v(i) = re[static_cast<std::size_t>(i)];
  return v;
}

Json complex_column_json(const Vector& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json::array({re, im});
}

Index entry_dim(const Json& entry) {
  if (entry.is_array() && entry.size() == 2 && entry[0].is_array()) return static_cast<Index>(entry[0].size());
  if (entry.is_array()) return static_cast<Index>(entry.size());
  fail("sequence entry must be an array");
}

std::vector<Complex> coefficient_list(const Json& j) {
  if (!j.is_array()) fail("coeffs must be an array");
  std::vector<Complex> out;
  for (const auto& c : j) {
    if (c.is_number()) {
      out.emplace_back(c.get<double>(), 0.0);
    } else if (c.is_array() && c.size() == 2) {
      out.emplace_back(number(c[0], "coeff"), number(c[1], "coeff"));
    } else {
      fail("each coefficient must be a number or [re, im]");
    }
  }
  return out;
}

Kernel kernel_from_json(const Json& t, Index d) {
  const std::string name = t.value("kernel", std::string{});
  if (name == "zero") return ZeroKernel{};
  if (name == "linear") {
    if (!t.contains("B")) fail("linear kernel needs B");
    return LinearKernel{matrix_from_json(t.at("B"))};
  }
  if (name == "saturation" || name == "scaled_bounded_saturation") {
    if (!t.contains("eps")) fail("saturation kernel needs eps");
    Matrix c = t.contains("coupling") ? matrix_from_json(t.at("coupling")) : Matrix::Ones(d, d);
    return SaturationKernel{number(t.at("eps"), "eps"), std::move(c)};
  }
  if (name == "polynomial_clipped") {
    if (!t.contains("coeffs") || !t.contains("clip_radius")) fail("polynomial_clipped needs coeffs and clip_radius");
    return ClippedPolynomialKernel{coefficient_list(t.at("coeffs")), number(t.at("clip_radius"), "clip_radius")};
  }
  fail("unknown kernel '" + name + "'");
}

Index infer_dim(const Json& j, Index fallback) {
  if (j.contains("dim")) return j.at("dim").get<Index>();
  auto from_term = [](const Json& t) -> Index {
    for (const char* key : {"B", "coupling"}) {
      if (t.contains(key)) return matrix_from_json(t.at(key)).rows();
    }
    return 0;
  };
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      if (const Index d = from_term(t)) return d;
    }
  } else if (const Index d = from_term(j)) {
    return d;
  }
  if (j.contains("forcing")) return sequence_from_json(j.at("forcing")).dim();
  if (fallback > 0) return fallback;
  fail("stencil dimension cannot be inferred; add \"dim\"");
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(e.what());
  }
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, "'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::io_error, "write to '" + path + "' failed");
}

Matrix matrix_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_object() || !j.contains("re")) fail("matrix needs \"re\"");
    const Json& re = j.at("re");
    if (!re.is_array() || re.empty()) fail("matrix \"re\" must be a non-empty array of rows");
    const auto rows = static_cast<Index>(re.size());
    const auto cols = static_cast<Index>(re[0].size());
    if (j.contains("dim") && (j.at("dim").get<Index>() != rows || rows != cols)) fail("matrix \"dim\" disagrees with entries");
    Matrix m = Matrix::Zero(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      const auto row = real_row(re[static_cast<std::size_t>(r)], "matrix row");
      if (static_cast<Index>(row.size()) != cols) fail("ragged matrix rows");
      for (Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    if (j.contains("im")) {
      const Json& im = j.at("im");
      if (!im.is_array() || static_cast<Index>(im.size()) != rows) fail("matrix \"im\" has the wrong shape");
      for (Index r = 0; r < rows; ++r) {
        const auto row = real_row(im[static_cast<std::size_t>(r)], "matrix row");
        if (static_cast<Index>(row.size()) != cols) fail("matrix \"im\" has the wrong shape");
        for (Index c = 0; c < cols; ++c) m(r, c).imag(row[static_cast<std::size_t>(c)]);
      }
    }
    return m;
  });
}

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return Json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

Vector vector_from_json(const Json& j) {
  return guarded([&] {
    if (j.is_array()) return complex_column(j, entry_dim(j), "vector");
    if (!j.is_object() || !j.contains("re")) fail("vector needs \"re\"");
    const auto re = real_row(j.at("re"), "vector");
    const auto d = static_cast<Index>(re.size());
    if (j.contains("dim") && j.at("dim").get<Index>() != d) fail("vector \"dim\" disagrees with entries");
    Vector v(d);
    const auto im = j.contains("im") ? real_row(j.at("im"), "vector") : std::vector<double>(re.size(), 0.0);
    if (im.size() != re.size()) fail("vector \"im\" has the wrong length");
    for (Index i = 0; i < d; ++i) v(i) = Complex(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
    return v;
  });
}

Json vector_to_json(const Vector& v) {
  Json j = complex_column_json(v);
  return Json{{"dim", v.size()}, {"re", j[0]}, {"im", j[1]}};
}

WindowedSequence sequence_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_object() || !j.contains("values")) fail("sequence needs \"values\"");
    const Json& vals = j.at("values");
    if (!vals.is_array() || vals.empty()) fail("sequence \"values\" must be a non-empty array");
    const Index d = j.contains("dim") ? j.at("dim").get<Index>() : entry_dim(vals[0]);
    if (d < 1) fail("sequence dimension must be positive");
    const Index lo = j.value("lo", Index{0});
    Matrix m(d, static_cast<Index>(vals.size()));
    for (Index k = 0; k < m.cols(); ++k) m.col(k) = complex_column(vals[static_cast<std::size_t>(k)], d, "sequence");
    return WindowedSequence(lo, std::move(m));
  });
}

Json sequence_to_json(const WindowedSequence& u) {
  Json vals = Json::array();
  for (Index n = u.lo(); n <= u.hi(); ++n) vals.push_back(complex_column_json(u.col(n)));
  return Json{{"dim", u.dim()}, {"lo", u.lo()}, {"hi", u.hi()}, {"values", vals}};
}

Json circle_to_json(const CircleFunction& f) {
  Json samples = Json::array();
  for (Index j = 0; j < f.size(); ++j) samples.push_back(complex_column_json(f.samples.col(j)));
  return Json{{"rho", f.rho}, {"n_samples", f.size()}, {"samples", samples}};
}

StencilMap stencil_from_json(const Json& j, Index default_dim) {
  return guarded([&] {
    if (!j.is_object()) fail("stencil must be an object");
    const Index d = infer_dim(j, default_dim);
    std::optional<WindowedSequence> forcing;
    if (j.contains("forcing") && !j.at("forcing").is_null()) forcing = sequence_from_json(j.at("forcing"));

    if (j.value("kernel", std::string{}) == "implicit_euler") {
      StencilMap m = StencilMap::implicit_euler(d, number(j.at("h"), "h"), j.value("f", std::string{"neg_identity"}));
      return forcing ? m.with_forcing(*forcing) : m;
    }
    std::vector<StencilTerm> terms;
    if (j.contains("terms")) {
      for (const auto& t : j.at("terms")) terms.push_back({t.value("offset", Index{0}), kernel_from_json(t, d)});
    } else if (j.contains("kernel")) {
      terms.push_back({j.value("offset", Index{0}), kernel_from_json(j, d)});
    }
    return StencilMap(d, std::move(terms), std::move(forcing));
  });
}

std::vector<Vector> grid_from_json(const Json& j) {
  return guarded([&] {
    const Json& list = j.is_object() && j.contains("grid") ? j.at("grid") : j;
    if (!list.is_array()) fail("grid must be an array of vectors");
    std::vector<Vector> out;
    for (const auto& v : list) out.push_back(vector_from_json(v));
    return out;
  });
}

std::string sequence_csv(const WindowedSequence& u) {
  std::ostringstream out;
  out.precision(17);
  out << "n,component,re,im\n";
  for (Index n = u.lo(); n <= u.hi(); ++n) {
    for (Index i = 0; i < u.dim(); ++i) out << n << ',' << i << ',' << u.col(n)(i).real() << ',' << u.col(n)(i).imag() << '\n';
  }
  return out.str();
}

}  // namespace specseq
