#include "bilbog/bohr.hpp"

#include <sstream>

namespace bilbog {

uint8_t BiaffineForm::eval(const GVector& x, const GVector& y) const {
  const Ambient& amb = m.amb;
  uint32_t acc = uint32_t(x.dot(m.apply(y))) + x.dot(a) + y.dot(b) + c;
  return uint8_t(acc % amb.p);
}

BohrVariety::BohrVariety(const Ambient& amb, std::vector<BiaffineForm> forms)
    : amb_(amb), forms_(std::move(forms)) {
  theorem_form_ = true;
  for (const BiaffineForm& f : forms_) {
    if (!(f.m.amb == amb_) || !(f.a.amb == amb_) || !(f.b.amb == amb_))
      throw MismatchError("BohrVariety: ambient mismatch");
    if (f.c >= amb_.p) throw MismatchError("BohrVariety: constant out of range");
    if (!f.b.is_zero() || f.c != 0) theorem_form_ = false;
  }
}

BohrVariety BohrVariety::from_affine_family(const Ambient& amb,
                                            const std::vector<AffineEndo>& alphas) {
  std::vector<BiaffineForm> forms;
  forms.reserve(alphas.size());
  for (const AffineEndo& al : alphas) {
    if (!(al.ambient() == amb)) throw MismatchError("from_affine_family: ambient mismatch");
    BiaffineForm f{al.linear, al.translation, GVector::zero(amb), 0};
    forms.push_back(std::move(f));
  }
  return BohrVariety(amb, std::move(forms));
}

BohrVariety BohrVariety::linear_part() const {
  if (!theorem_form_)
    throw MismatchError("linear_part: variety is not of theorem form (b or c nonzero)");
  std::vector<BiaffineForm> forms = forms_;
  for (BiaffineForm& f : forms) f.a = GVector::zero(amb_);
  return BohrVariety(amb_, std::move(forms));
}

bool BohrVariety::member(const GVector& x, const GVector& y) const {
  for (const BiaffineForm& f : forms_)
    if (f.eval(x, y) != 0) return false;
  return true;
}

bool BohrVariety::member_idx(size_t x, size_t y) const {
  return member(GVector::decode(amb_, x), GVector::decode(amb_, y));
}

Coset BohrVariety::row_coset(size_t x) const {
  // Constraints on y: (M_i^T x + b_i) . y = -(a_i . x + c_i).
  const GVector vx = GVector::decode(amb_, x);
  std::vector<GVector> normals;
  std::vector<uint8_t> rhs;
  normals.reserve(forms_.size());
  for (const BiaffineForm& f : forms_) {
    normals.push_back(f.m.transposed().apply(vx) + f.b);
    const uint32_t r = uint32_t(vx.dot(f.a)) + f.c;
    rhs.push_back(uint8_t((amb_.p - r % amb_.p) % amb_.p));
  }
  // Solve the small affine system by elimination on [normals | rhs].
  const uint32_t n = amb_.n;
  std::vector<std::vector<uint8_t>> rows;
  for (size_t i = 0; i < normals.size(); ++i) {
    std::vector<uint8_t> row = normals[i].c;
    row.push_back(rhs[i]);
    rows.push_back(std::move(row));
  }
  std::vector<uint32_t> pivots;
  size_t rank = 0;
  for (uint32_t col = 0; col < n && rank < rows.size(); ++col) {
    size_t sel = rank;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    const uint8_t inv = mod_inverse(rows[rank][col], amb_.p);
    for (uint32_t j = col; j <= n; ++j) rows[rank][j] = uint8_t(rows[rank][j] * inv % amb_.p);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      const uint32_t f = rows[i][col];
      for (uint32_t j = col; j <= n; ++j)
        rows[i][j] = uint8_t((rows[i][j] + (amb_.p - f) * rows[rank][j]) % amb_.p);
    }
    pivots.push_back(col);
    ++rank;
  }
  for (size_t i = rank; i < rows.size(); ++i)
    if (rows[i][n] != 0) return Coset::empty_coset(amb_);

  GVector rep = GVector::zero(amb_);
  for (size_t r = 0; r < pivots.size(); ++r) rep.c[pivots[r]] = rows[r][n];
  Subspace w = orthogonal_complement(Subspace::span(amb_, normals));
  return Coset::of(std::move(w), rep);
}

size_t BohrVariety::codim_upper() const {
  // Stack each form's coefficients (M row-major, a, b, c) and take the rank.
  const uint32_t n = amb_.n;
  const uint32_t width = n * n + 2 * n + 1;
  std::vector<std::vector<uint8_t>> rows;
  for (const BiaffineForm& f : forms_) {
    std::vector<uint8_t> row;
    row.reserve(width);
    row.insert(row.end(), f.m.a.begin(), f.m.a.end());
    row.insert(row.end(), f.a.c.begin(), f.a.c.end());
    row.insert(row.end(), f.b.c.begin(), f.b.c.end());
    row.push_back(f.c);
    rows.push_back(std::move(row));
  }
  // Rank via elimination.
  size_t rank = 0;
  for (uint32_t col = 0; col < width && rank < rows.size(); ++col) {
    size_t sel = rank;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    const uint8_t inv = mod_inverse(rows[rank][col], amb_.p);
    for (uint32_t j = col; j < width; ++j) rows[rank][j] = uint8_t(rows[rank][j] * inv % amb_.p);
    for (size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      const uint32_t f = rows[i][col];
      for (uint32_t j = col; j < width; ++j)
        rows[i][j] = uint8_t((rows[i][j] + (amb_.p - f) * rows[rank][j]) % amb_.p);
    }
    ++rank;
  }
  return std::min(forms_.size(), rank);
}

ProductSet BohrVariety::to_grid() const {
  ProductSet g(amb_);
  const size_t n_pts = amb_.size();
  for (size_t x = 0; x < n_pts; ++x) {
    const Coset row = row_coset(x);
    if (row.empty) continue;
    for (size_t y : elements_sorted(row.space))
      g.set(x, idx_add(amb_, y, row.rep.encode()));
  }
  return g;
}

std::string BohrVariety::to_text() const {
  std::ostringstream out;
  out << amb_.p << ' ' << amb_.n << ' ' << forms_.size() << '\n';
  for (const BiaffineForm& f : forms_) {
    for (uint32_t i = 0; i < amb_.n; ++i) {
      for (uint32_t j = 0; j < amb_.n; ++j) out << (j ? " " : "") << int(f.m.at(i, j));
      out << '\n';
    }
    for (uint32_t i = 0; i < amb_.n; ++i) out << (i ? " " : "") << int(f.a.c[i]);
    out << '\n';
    for (uint32_t i = 0; i < amb_.n; ++i) out << (i ? " " : "") << int(f.b.c[i]);
    out << '\n';
    out << int(f.c) << '\n';
  }
  return out.str();
}

BohrVariety BohrVariety::from_text(const std::string& text) {
  std::istringstream in(text);
  uint32_t p = 0, n = 0;
  size_t k = 0;
  if (!(in >> p >> n >> k)) throw ParseError("variety text: bad header", 0);
  if (!is_prime(p) || p > 251 || n < 1 || n > 40)
    throw ParseError("variety text: invalid (p, n)", 0);
  const Ambient amb(p, n);
  auto read_residue = [&](const char* what) {
    int v;
    if (!(in >> v) || v < 0 || v >= int(p))
      throw ParseError(std::string("variety text: bad ") + what,
                       size_t(std::max<std::streamoff>(0, in.tellg())));
    return uint8_t(v);
  };
  std::vector<BiaffineForm> forms;
  for (size_t f = 0; f < k; ++f) {
    BiaffineForm form{FpMatrix(amb), GVector::zero(amb), GVector::zero(amb), 0};
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j) form.m.at(i, j) = read_residue("matrix entry");
    for (uint32_t i = 0; i < n; ++i) form.a.c[i] = read_residue("a entry");
    for (uint32_t i = 0; i < n; ++i) form.b.c[i] = read_residue("b entry");
    form.c = read_residue("constant");
    forms.push_back(std::move(form));
  }
  return BohrVariety(amb, std::move(forms));
}

bool BohrVariety::operator==(const BohrVariety& o) const {
  if (!(amb_ == o.amb_) || forms_.size() != o.forms_.size()) return false;
  for (size_t i = 0; i < forms_.size(); ++i) {
    if (!(forms_[i].m == o.forms_[i].m) || !(forms_[i].a == o.forms_[i].a) ||
        !(forms_[i].b == o.forms_[i].b) || forms_[i].c != o.forms_[i].c)
      return false;
  }
  return true;
}

std::vector<std::pair<size_t, size_t>> enumerate_structured(const StructuredSet& s,
                                                            size_t guard) {
  const Ambient& amb = s.variety.ambient();
  if (!(s.u.ambient() == amb) || !(s.v.ambient() == amb))
    throw MismatchError("enumerate_structured: ambient mismatch");
  double pairs = 1.0;
  for (size_t i = 0; i < s.u.dim() + s.v.dim(); ++i) pairs *= amb.p;
  if (pairs > double(guard))
    throw GuardError("enumerate_structured: |U| * |V| exceeds the enumeration guard");
  const std::vector<size_t> xs = elements_sorted(s.u, guard);
  const std::vector<size_t> ys = elements_sorted(s.v, guard);
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t x : xs) {
    // Per x the forms reduce to (M^T x + b) . y + (a . x + c).
    const GVector vx = GVector::decode(amb, x);
    std::vector<size_t> normals;
    std::vector<uint8_t> offsets;
    for (const BiaffineForm& f : s.variety.forms()) {
      normals.push_back((f.m.transposed().apply(vx) + f.b).encode());
      offsets.push_back(uint8_t((uint32_t(vx.dot(f.a)) + f.c) % amb.p));
    }
    for (size_t y : ys) {
      bool ok = true;
      for (size_t i = 0; i < normals.size() && ok; ++i)
        ok = (idx_dot(amb, normals[i], y) + offsets[i]) % amb.p == 0;
      if (ok) out.emplace_back(x, y);
    }
  }
  return out;
}

ContainmentReport containment_check(const StructuredSet& s, const ProductSet& a, size_t guard) {
  if (!(s.variety.ambient() == a.ambient()))
    throw MismatchError("containment_check: ambient mismatch");
  ContainmentReport rep;
  for (const auto& [x, y] : enumerate_structured(s, guard)) {
    ++rep.structured_size;
    if (!a.test(x, y)) {
      rep.contained = false;
      if (rep.witnesses.size() < 10) rep.witnesses.emplace_back(x, y);
    }
  }
  return rep;
}

}  // namespace bilbog
