#include "lwb/group/finite.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "lwb/error.hpp"

namespace lwb::group {

namespace {

std::string triple(Elem a, Elem b, Elem c) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

std::string pair_str(Elem a, Elem b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

void check_square(const Table& t, std::size_t n, const char* code, const char* what) {
  if (t.size() != n) throw Error(code, std::string(what) + " has wrong row count");
  for (const auto& row : t) {
    if (row.size() != n) throw Error(code, std::string(what) + " is not square");
    for (Elem x : row)
      if (x >= n) throw Error(code, std::string(what) + " entry out of range");
  }
}

// Returns m^k, or nullopt if it exceeds cap.
std::optional<std::uint64_t> bounded_power(std::uint64_t m, std::uint64_t k, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (m != 0 && r > cap / m) return std::nullopt;
    r *= m;
  }
  return r <= cap ? std::optional<std::uint64_t>(r) : std::nullopt;
}

// First normalized cochain h, in enumeration order, with d h = target.
EquivalenceResult search_primitive(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& target,
                                   std::uint64_t cap) {
  EquivalenceResult res;
  std::vector<GroupCochain> hs;
  try {
    hs = all_normalized_cochains(g, a, target.degree() - 1, cap);
  } catch (const Error& e) {
    if (e.code() != "undecided_capped") throw;
    res.status = SearchStatus::undecided_capped;
    return res;
  }
  for (auto& h : hs) {
    if (group_differential(g, a, h) == target) {
      res.status = SearchStatus::found;
      res.h = std::move(h);
      return res;
    }
  }
  res.status = SearchStatus::not_found;
  return res;
}

std::vector<std::size_t> mixed_radix(std::size_t idx, const std::vector<std::size_t>& orders) {
  std::vector<std::size_t> digits(orders.size());
  for (std::size_t i = orders.size(); i-- > 0;) {
    digits[i] = idx % orders[i];
    idx /= orders[i];
  }
  return digits;
}

Table product_of_cyclics(const std::vector<std::size_t>& orders) {
  std::size_t m = 1;
  for (auto k : orders) {
    if (k == 0) throw Error("not_a_module", "cyclic factor of order 0");
    m *= k;
  }
  Table add(m, std::vector<Elem>(m));
  for (std::size_t x = 0; x < m; ++x) {
    auto dx = mixed_radix(x, orders);
    for (std::size_t y = 0; y < m; ++y) {
      auto dy = mixed_radix(y, orders);
      std::size_t z = 0;
      for (std::size_t i = 0; i < orders.size(); ++i) z = z * orders[i] + (dx[i] + dy[i]) % orders[i];
      add[x][y] = z;
    }
  }
  return add;
}

}  // namespace

// ---------------------------------------------------------------- groups

std::optional<std::array<Elem, 3>> associativity_witness(const Table& mul) {
  const std::size_t n = mul.size();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]]) return std::array<Elem, 3>{a, b, c};
  return std::nullopt;
}

FiniteGroup FiniteGroup::from_table(Table mul) {
  const std::size_t n = mul.size();
  if (n == 0) throw Error("not_a_group", "empty table");
  check_square(mul, n, "not_a_group", "multiplication table");
  if (auto w = associativity_witness(mul)) throw Error("not_a_group", "associativity fails at " + triple((*w)[0], (*w)[1], (*w)[2]));
  FiniteGroup g;
  bool found = false;
  for (Elem e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (Elem x = 0; x < n && ok; ++x) ok = mul[e][x] == x && mul[x][e] == x;
    if (ok) {
      g.identity_ = e;
      found = true;
    }
  }
  if (!found) throw Error("not_a_group", "no identity element");
  g.inv_.assign(n, n);
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y)
      if (mul[x][y] == g.identity_ && mul[y][x] == g.identity_) {
        g.inv_[x] = y;
        break;
      }
    if (g.inv_[x] == n) throw Error("not_a_group", "element " + std::to_string(x) + " has no inverse");
  }
  g.mul_ = std::move(mul);
  return g;
}

FiniteGroup trivial_group() { return FiniteGroup::from_table({{0}}); }

FiniteGroup cyclic(std::size_t n) {
  if (n == 0) throw Error("not_a_group", "cyclic group of order 0");
  Table t(n, std::vector<Elem>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup::from_table(std::move(t));
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t n = g.order(), m = h.order();
  Table t(n * m, std::vector<Elem>(n * m));
  for (std::size_t x = 0; x < n * m; ++x)
    for (std::size_t y = 0; y < n * m; ++y) t[x][y] = g.mul(x / m, y / m) * m + h.mul(x % m, y % m);
  return FiniteGroup::from_table(std::move(t));
}

FiniteGroup symmetric3() {
  // Permutations of {0,1,2} in lexicographic order; product is composition (ab)(i) = a(b(i)).
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  Table t(6, std::vector<Elem>(6));
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = static_cast<Elem>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return FiniteGroup::from_table(std::move(t));
}

Subgroup make_subgroup(const FiniteGroup& g, std::vector<Elem> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  std::vector<std::size_t> pos(g.order(), g.order());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] >= g.order()) throw Error("not_a_subgroup", "element out of range");
    pos[elements[i]] = i;
  }
  if (elements.empty() || pos[g.identity()] == g.order()) throw Error("not_a_subgroup", "identity missing");
  const std::size_t k = elements.size();
  Table t(k, std::vector<Elem>(k));
  for (std::size_t i = 0; i < k; ++i) {
    if (pos[g.inv(elements[i])] == g.order())
      throw Error("not_a_subgroup", "inverse of " + std::to_string(elements[i]) + " missing");
    for (std::size_t j = 0; j < k; ++j) {
      Elem prod = g.mul(elements[i], elements[j]);
      if (pos[prod] == g.order()) throw Error("not_a_subgroup", "not closed at " + pair_str(elements[i], elements[j]));
      t[i][j] = pos[prod];
    }
  }
  return Subgroup{FiniteGroup::from_table(std::move(t)), std::move(elements)};
}

bool is_normal(const FiniteGroup& g, const Subgroup& n) {
  std::vector<bool> in(g.order(), false);
  for (Elem x : n.embed) in[x] = true;
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem m : n.embed)
      if (!in[g.mul(g.mul(x, m), g.inv(x))]) return false;
  return true;
}

Quotient make_quotient(const FiniteGroup& g, const Subgroup& n) {
  if (!is_normal(g, n)) throw Error("not_normal", "subgroup is not normal");
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  Quotient q;
  q.proj.assign(g.order(), none);
  for (Elem x = 0; x < g.order(); ++x) {
    if (q.proj[x] != none) continue;
    const std::size_t label = q.transversal.size();
    q.transversal.push_back(x);
    for (Elem m : n.embed) q.proj[g.mul(x, m)] = label;
  }
  const std::size_t k = q.transversal.size();
  Table t(k, std::vector<Elem>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) t[i][j] = q.proj[g.mul(q.transversal[i], q.transversal[j])];
  q.group = FiniteGroup::from_table(std::move(t));
  return q;
}

// ---------------------------------------------------------------- modules

FiniteModule FiniteModule::make(const FiniteGroup& g, Table add, Table action) {
  const std::size_t m = add.size();
  if (m == 0) throw Error("not_a_module", "empty module");
  check_square(add, m, "not_a_module", "addition table");
  for (Elem x = 0; x < m; ++x)
    if (add[0][x] != x || add[x][0] != x) throw Error("not_a_module", "0 is not neutral");
  for (Elem x = 0; x < m; ++x)
    for (Elem y = 0; y < m; ++y)
      if (add[x][y] != add[y][x]) throw Error("not_a_module", "addition not commutative at " + pair_str(x, y));
  if (auto w = associativity_witness(add))
    throw Error("not_a_module", "addition not associative at " + triple((*w)[0], (*w)[1], (*w)[2]));
  FiniteModule mod;
  mod.neg_.assign(m, m);
  for (Elem x = 0; x < m; ++x) {
    for (Elem y = 0; y < m; ++y)
      if (add[x][y] == 0) {
        mod.neg_[x] = y;
        break;
      }
    if (mod.neg_[x] == m) throw Error("not_a_module", "element " + std::to_string(x) + " has no negative");
  }
  if (action.size() != g.order()) throw Error("not_a_module", "action needs one row per group element");
  for (Elem s = 0; s < g.order(); ++s) {
    if (action[s].size() != m) throw Error("not_a_module", "action row has wrong length");
    std::vector<bool> hit(m, false);
    for (Elem x = 0; x < m; ++x) {
      if (action[s][x] >= m) throw Error("not_a_module", "action entry out of range");
      hit[action[s][x]] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end())
      throw Error("not_a_module", "element " + std::to_string(s) + " does not act bijectively");
    for (Elem x = 0; x < m; ++x)
      for (Elem y = 0; y < m; ++y)
        if (action[s][add[x][y]] != add[action[s][x]][action[s][y]])
          throw Error("not_a_module", "element " + std::to_string(s) + " is not additive at " + pair_str(x, y));
  }
  for (Elem x = 0; x < m; ++x)
    if (action[g.identity()][x] != x) throw Error("not_a_module", "identity acts nontrivially");
  for (Elem s = 0; s < g.order(); ++s)
    for (Elem t = 0; t < g.order(); ++t)
      for (Elem x = 0; x < m; ++x)
        if (action[g.mul(s, t)][x] != action[s][action[t][x]])
          throw Error("not_a_module", "(st).a != s.(t.a) at " + triple(s, t, x));
  mod.add_ = std::move(add);
  mod.act_ = std::move(action);
  return mod;
}

FiniteModule FiniteModule::trivial(const FiniteGroup& g, const std::vector<std::size_t>& cyclic_orders) {
  Table add = product_of_cyclics(cyclic_orders);
  std::vector<Elem> id(add.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  return make(g, std::move(add), Table(g.order(), id));
}

FiniteModule FiniteModule::with_action(const FiniteGroup& g, const std::vector<std::size_t>& cyclic_orders,
                                       const Table& action) {
  return make(g, product_of_cyclics(cyclic_orders), action);
}

FiniteModule FiniteModule::pulled_back(const FiniteGroup& h, const std::vector<Elem>& hom) const {
  if (hom.size() != h.order()) throw Error("dimension_mismatch", "homomorphism size");
  Table act(h.order());
  for (Elem x = 0; x < h.order(); ++x) act[x] = act_.at(hom[x]);
  return make(h, add_, std::move(act));
}

FixedSubmodule fixed_submodule(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n, const Quotient& q) {
  (void)g;
  FixedSubmodule out;
  std::vector<std::size_t> pos(a.order(), a.order());
  for (Elem x = 0; x < a.order(); ++x) {
    bool fixed = true;
    for (Elem m : n.embed) fixed = fixed && a.act(m, x) == x;
    if (fixed) {
      pos[x] = out.embed.size();
      out.embed.push_back(x);
    }
  }
  const std::size_t k = out.embed.size();
  Table add(k, std::vector<Elem>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) add[i][j] = pos[a.add(out.embed[i], out.embed[j])];
  Table act(q.group.order(), std::vector<Elem>(k));
  for (Elem c = 0; c < q.group.order(); ++c)
    for (std::size_t i = 0; i < k; ++i) act[c][i] = pos[a.act(q.transversal[c], out.embed[i])];
  out.module = FiniteModule::make(q.group, std::move(add), std::move(act));
  return out;
}

// ---------------------------------------------------------------- cochains

GroupCochain::GroupCochain(std::size_t degree, std::size_t group_order) : degree_(degree), n_(group_order) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < degree; ++i) size *= group_order;
  values_.assign(size, 0);
}

std::size_t GroupCochain::index(const std::vector<Elem>& args) const {
  if (args.size() != degree_) throw Error("dimension_mismatch", "cochain argument count");
  std::size_t idx = 0;
  for (Elem x : args) {
    if (x >= n_) throw Error("index_out_of_range", "cochain argument");
    idx = idx * n_ + x;
  }
  return idx;
}

std::vector<Elem> GroupCochain::args(std::size_t index) const {
  std::vector<Elem> out(degree_);
  for (std::size_t i = degree_; i-- > 0;) {
    out[i] = index % n_;
    index /= n_;
  }
  return out;
}

bool GroupCochain::is_normalized(Elem identity) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 0) continue;
    auto a = args(i);
    if (std::find(a.begin(), a.end(), identity) != a.end()) return false;
  }
  return true;
}

GroupCochain zero_cochain(const FiniteGroup& g, std::size_t p) { return GroupCochain(p, g.order()); }

GroupCochain group_differential(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f) {
  const std::size_t p = f.degree(), n = g.order();
  GroupCochain out(p + 1, n);
  const auto& fv = f.values();
  std::vector<Elem> x(p + 1, 0);
  for (std::size_t idx = 0; idx < out.values().size(); ++idx) {
    // index of f(x_1..x_p) and f(x_0..x_{p-1})
    std::size_t tail = 0, head = 0;
    for (std::size_t k = 1; k <= p; ++k) tail = tail * n + x[k];
    for (std::size_t k = 0; k < p; ++k) head = head * n + x[k];
    Elem acc = a.act(x[0], fv[tail]);
    for (std::size_t i = 1; i <= p; ++i) {
      std::size_t merged = 0;
      for (std::size_t k = 0; k <= p; ++k) {
        if (k == i) continue;
        merged = merged * n + ((k == i - 1) ? g.mul(x[i - 1], x[i]) : x[k]);
      }
      acc = (i % 2 == 0) ? a.add(acc, fv[merged]) : a.sub(acc, fv[merged]);
    }
    acc = ((p + 1) % 2 == 0) ? a.add(acc, fv[head]) : a.sub(acc, fv[head]);
    out.values()[idx] = acc;
    for (std::size_t k = p + 1; k-- > 0;) {
      if (++x[k] < n) break;
      x[k] = 0;
    }
  }
  return out;
}

GroupCochain add(const FiniteModule& a, const GroupCochain& x, const GroupCochain& y) {
  if (x.degree() != y.degree() || x.group_order() != y.group_order()) throw Error("dimension_mismatch", "cochain add");
  GroupCochain out = x;
  for (std::size_t i = 0; i < out.values().size(); ++i) out.values()[i] = a.add(x.values()[i], y.values()[i]);
  return out;
}

GroupCochain subtract(const FiniteModule& a, const GroupCochain& x, const GroupCochain& y) {
  if (x.degree() != y.degree() || x.group_order() != y.group_order()) throw Error("dimension_mismatch", "cochain sub");
  GroupCochain out = x;
  for (std::size_t i = 0; i < out.values().size(); ++i) out.values()[i] = a.sub(x.values()[i], y.values()[i]);
  return out;
}

bool is_cocycle(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f) {
  const auto d = group_differential(g, a, f);
  return std::all_of(d.values().begin(), d.values().end(), [](Elem v) { return v == 0; });
}

std::vector<GroupCochain> all_normalized_cochains(const FiniteGroup& g, const FiniteModule& a, std::size_t p,
                                                  std::uint64_t cap) {
  GroupCochain base(p, g.order());
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < base.values().size(); ++i) {
    auto x = base.args(i);
    if (std::find(x.begin(), x.end(), g.identity()) == x.end()) free.push_back(i);
  }
  if (!bounded_power(a.order(), free.size(), cap))
    throw Error("undecided_capped", std::to_string(a.order()) + "^" + std::to_string(free.size()) +
                                        " cochains exceed the search cap");
  std::vector<GroupCochain> out;
  std::vector<Elem> digits(free.size(), 0);
  while (true) {
    for (std::size_t k = 0; k < free.size(); ++k) base.values()[free[k]] = digits[k];
    out.push_back(base);
    std::size_t k = free.size();
    while (k > 0) {
      --k;
      if (++digits[k] < a.order()) break;
      digits[k] = 0;
      if (k == 0) return out;
    }
    if (free.empty()) return out;
  }
}

std::size_t GroupCohomology::class_of(const GroupCochain& f) const {
  auto it = class_of_cocycle.find(f.values());
  if (it == class_of_cocycle.end() || f.degree() != degree) throw Error("not_a_cocycle", "not a normalized cocycle");
  return it->second;
}

GroupCohomology group_cohomology(const FiniteGroup& g, const FiniteModule& a, std::size_t p, std::uint64_t cap) {
  GroupCohomology h;
  h.degree = p;
  std::vector<GroupCochain> cocycles;
  for (auto& f : all_normalized_cochains(g, a, p, cap))
    if (is_cocycle(g, a, f)) cocycles.push_back(std::move(f));
  std::set<std::vector<Elem>> bounds;
  if (p == 0) {
    bounds.insert(GroupCochain(0, g.order()).values());
  } else {
    for (const auto& b : all_normalized_cochains(g, a, p - 1, cap)) bounds.insert(group_differential(g, a, b).values());
  }
  h.cocycle_count = cocycles.size();
  h.coboundary_count = bounds.size();
  for (const auto& z : cocycles) {
    if (h.class_of_cocycle.count(z.values())) continue;
    const std::size_t k = h.classes.size();
    h.classes.push_back(z);
    for (const auto& b : bounds) {
      GroupCochain bc(p, g.order());
      bc.values() = b;
      h.class_of_cocycle.emplace(add(a, z, bc).values(), k);
    }
  }
  if (h.class_of_cocycle.size() != h.cocycle_count)
    throw Error("internal_error", "coboundaries are not all cocycles");
  return h;
}

// ---------------------------------------------------------------- extensions

Table extension_table(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f) {
  if (f.degree() != 2 || f.group_order() != g.order()) throw Error("dimension_mismatch", "extension needs a 2-cochain on G");
  const std::size_t n = g.order(), m = a.order();
  Table t(n * m, std::vector<Elem>(n * m));
  for (Elem x = 0; x < n * m; ++x)
    for (Elem y = 0; y < n * m; ++y) {
      const Elem ax = x / n, gx = x % n, ay = y / n, gy = y % n;
      const Elem s = a.add(a.add(ax, a.act(gx, ay)), f({gx, gy}));
      t[x][y] = s * n + g.mul(gx, gy);
    }
  return t;
}

Extension build_extension(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f) {
  if (f.degree() != 2 || f.group_order() != g.order()) throw Error("dimension_mismatch", "extension needs a 2-cochain on G");
  if (!f.is_normalized(g.identity())) throw Error("not_normalized", "f(1,g) and f(g,1) must vanish");
  const std::size_t n = g.order();
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z) {
        Elem lhs = a.add(a.act(x, f({y, z})), f({x, g.mul(y, z)}));
        Elem rhs = a.add(f({g.mul(x, y), z}), f({x, y}));
        if (lhs != rhs) throw Error("not_associative", "cocycle identity fails at " + triple(x, y, z));
      }
  Extension e;
  e.group_order = n;
  e.group = FiniteGroup::from_table(extension_table(g, a, f));
  const FiniteGroup& E = e.group;
  for (Elem x = 0; x < E.order(); ++x) {
    const Elem ax = e.first(x), gx = e.second(x), gi = g.inv(gx);
    Elem expect = e.encode(a.neg(a.act(gi, a.add(ax, f({gx, gi})))), gi);
    if (E.inv(x) != expect) throw Error("internal_error", "inversion formula fails for " + std::to_string(x));
  }
  for (Elem x = 0; x < E.order(); ++x)
    for (Elem y = 0; y < E.order(); ++y) {
      const Elem ax = e.first(x), gx = e.second(x), ay = e.first(y), gy = e.second(y);
      const Elem c = g.mul(g.mul(gx, gy), g.inv(gx));
      Elem s = a.add(ax, a.act(gx, ay));
      s = a.sub(s, a.act(c, ax));
      s = a.add(s, f({gx, gy}));
      s = a.sub(s, f({c, gx}));
      if (E.mul(E.mul(x, y), E.inv(x)) != e.encode(s, c))
        throw Error("internal_error", "conjugation formula fails at " + pair_str(x, y));
      if (gy == g.identity() && e.first(E.mul(E.mul(x, y), E.inv(x))) != a.act(gx, ay))
        throw Error("internal_error", "conjugation on A is not the G-action at " + pair_str(x, y));
    }
  return e;
}

EquivalenceResult extensions_equivalent(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f1,
                                        const GroupCochain& f2, std::uint64_t cap) {
  if (f1.degree() != 2 || f2.degree() != 2) throw Error("dimension_mismatch", "extensions need 2-cochains");
  return search_primitive(g, a, subtract(a, f1, f2), cap);
}

EquivalenceResult direct_isomorphism_search(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f1,
                                            const GroupCochain& f2, std::uint64_t cap) {
  const Table t1 = extension_table(g, a, f1), t2 = extension_table(g, a, f2);
  const std::size_t n = g.order(), size = t1.size();
  EquivalenceResult res;
  std::vector<GroupCochain> hs;
  try {
    hs = all_normalized_cochains(g, a, 1, cap);
  } catch (const Error& e) {
    if (e.code() != "undecided_capped") throw;
    res.status = SearchStatus::undecided_capped;
    return res;
  }
  std::vector<Elem> phi(size);
  for (auto& h : hs) {
    for (Elem x = 0; x < size; ++x) phi[x] = a.add(x / n, h({x % n})) * n + x % n;
    bool hom = true;
    for (Elem x = 0; x < size && hom; ++x)
      for (Elem y = 0; y < size && hom; ++y) hom = phi[t1[x][y]] == t2[phi[x]][phi[y]];
    if (hom) {
      res.status = SearchStatus::found;
      res.h = std::move(h);
      return res;
    }
  }
  res.status = SearchStatus::not_found;
  return res;
}

// ---------------------------------------------------------------- five-term sequence

GroupCochain inflation(const Quotient& q, const FixedSubmodule& an, const GroupCochain& f, std::size_t g_order) {
  GroupCochain out(f.degree(), g_order);
  std::vector<Elem> qa(f.degree());
  for (std::size_t idx = 0; idx < out.values().size(); ++idx) {
    auto x = out.args(idx);
    for (std::size_t i = 0; i < x.size(); ++i) qa[i] = q.proj[x[i]];
    out.values()[idx] = an.embed[f(qa)];
  }
  return out;
}

GroupCochain restriction(const Subgroup& n, const GroupCochain& f) {
  GroupCochain out(f.degree(), n.group.order());
  std::vector<Elem> ga(f.degree());
  for (std::size_t idx = 0; idx < out.values().size(); ++idx) {
    auto x = out.args(idx);
    for (std::size_t i = 0; i < x.size(); ++i) ga[i] = n.embed[x[i]];
    out.values()[idx] = f(ga);
  }
  return out;
}

namespace {

std::vector<std::size_t> subgroup_positions(const FiniteGroup& g, const Subgroup& n) {
  std::vector<std::size_t> pos(g.order(), g.order());
  for (std::size_t i = 0; i < n.embed.size(); ++i) pos[n.embed[i]] = i;
  return pos;
}

// d_G a for the a(xm) = alpha(x) + x.f(m) construction, pushed down to G/N.
GroupCochain transgress(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n, const Quotient& q,
                        const FixedSubmodule& an, const GroupCochain& f, const std::vector<Elem>& reps) {
  const auto pos = subgroup_positions(g, n);
  const std::size_t k = q.group.order();
  std::vector<Elem> alpha(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    const Elem x = reps[c];
    const GroupCochain xf = conjugate_action(g, a, n, x, f);
    auto fits = [&](Elem al) {
      for (std::size_t m = 0; m < n.embed.size(); ++m) {
        Elem lhs = a.sub(a.act(n.embed[m], al), al);
        if (lhs != a.sub(xf({m}), f({m}))) return false;
      }
      return true;
    };
    if (c == q.proj[g.identity()]) {
      // a(e) = 0 pins alpha on the identity coset.
      alpha[c] = a.neg(a.act(x, f({pos[g.inv(x)]})));
      if (!fits(alpha[c])) throw Error("not_invariant", "class is not G-invariant at " + std::to_string(x));
      continue;
    }
    bool found = false;
    for (Elem al = 0; al < a.order() && !found; ++al)
      if (fits(al)) {
        alpha[c] = al;
        found = true;
      }
    if (!found) throw Error("not_invariant", "no alpha for coset representative " + std::to_string(x));
  }
  GroupCochain lift(1, g.order());
  for (Elem y = 0; y < g.order(); ++y) {
    const std::size_t c = q.proj[y];
    const Elem x = reps[c];
    const Elem m = pos[g.mul(g.inv(x), y)];
    lift.values()[y] = a.add(alpha[c], a.act(x, f({m})));
  }
  if (lift({g.identity()}) != 0) throw Error("internal_error", "lift is not normalized");
  const GroupCochain big = group_differential(g, a, lift);
  std::vector<std::size_t> an_pos(a.order(), a.order());
  for (std::size_t i = 0; i < an.embed.size(); ++i) an_pos[an.embed[i]] = i;
  GroupCochain out(2, k);
  std::vector<bool> seen(out.values().size(), false);
  for (Elem y = 0; y < g.order(); ++y)
    for (Elem z = 0; z < g.order(); ++z) {
      const Elem v = big({y, z});
      if (an_pos[v] == a.order()) throw Error("internal_error", "transgression leaves A^N at " + pair_str(y, z));
      const std::size_t idx = out.index({q.proj[y], q.proj[z]});
      if (seen[idx] && out.values()[idx] != an_pos[v])
        throw Error("internal_error", "transgression does not factor through G/N at " + pair_str(y, z));
      seen[idx] = true;
      out.values()[idx] = an_pos[v];
    }
  return out;
}

std::vector<std::size_t> kernel_of(const std::vector<std::size_t>& images) {
  std::vector<std::size_t> ker;
  for (std::size_t i = 0; i < images.size(); ++i)
    if (images[i] == 0) ker.push_back(i);
  return ker;
}

std::vector<std::size_t> image_of(const std::vector<std::size_t>& images) {
  std::set<std::size_t> s(images.begin(), images.end());
  s.erase(std::numeric_limits<std::size_t>::max());
  return {s.begin(), s.end()};
}

}  // namespace

GroupCochain conjugate_action(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n, Elem x,
                              const GroupCochain& f) {
  const auto pos = subgroup_positions(g, n);
  GroupCochain out(1, n.group.order());
  for (std::size_t m = 0; m < n.embed.size(); ++m) {
    const Elem conj = g.mul(g.mul(g.inv(x), n.embed[m]), x);
    if (pos[conj] == g.order()) throw Error("not_normal", "subgroup is not normal");
    out.values()[m] = a.act(x, f({pos[conj]}));
  }
  return out;
}

ConnectingResult connecting_delta(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n, const Quotient& q,
                                  const FixedSubmodule& an, const GroupCochain& f) {
  if (f.degree() != 1 || f.group_order() != n.group.order())
    throw Error("dimension_mismatch", "connecting map takes a 1-cochain on N");
  const FiniteModule an_mod = an.module;
  const FiniteModule a_n = a.pulled_back(n.group, n.embed);
  if (!is_cocycle(n.group, a_n, f)) throw Error("not_a_cocycle", "f is not a cocycle on N");
  std::vector<Elem> high(q.group.order(), 0);
  for (Elem y = 0; y < g.order(); ++y) high[q.proj[y]] = std::max(high[q.proj[y]], y);
  ConnectingResult r{transgress(g, a, n, q, an, f, q.transversal), transgress(g, a, n, q, an, f, high), false};
  if (!is_cocycle(q.group, an_mod, r.delta)) throw Error("internal_error", "transgression is not a cocycle");
  r.independent = search_primitive(q.group, an_mod, subtract(an_mod, r.delta, r.delta_alt), kDefaultSearchCap).status ==
                  SearchStatus::found;
  return r;
}

std::string FiveTermReport::status() const {
  if (!exact()) return "not_exact";
  return degenerate ? "degenerate_valid" : "exact";
}

FiveTermReport five_term_check(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n) {
  const Quotient q = make_quotient(g, n);
  const FixedSubmodule an = fixed_submodule(g, a, n, q);
  const FiniteModule a_n = a.pulled_back(n.group, n.embed);
  const auto h1q = group_cohomology(q.group, an.module, 1);
  const auto h1g = group_cohomology(g, a, 1);
  const auto h1n = group_cohomology(n.group, a_n, 1);
  const auto h2q = group_cohomology(q.group, an.module, 2);
  const auto h2g = group_cohomology(g, a, 2);
  const std::size_t none = std::numeric_limits<std::size_t>::max();

  FiveTermReport r;
  r.degenerate = q.group.order() == 1;
  r.h1_quotient = h1q.order();
  r.h1_group = h1g.order();
  r.h2_quotient = h2q.order();
  r.h2_group = h2g.order();

  std::vector<bool> invariant(h1n.order(), true);
  for (std::size_t c = 0; c < h1n.order(); ++c)
    for (Elem x = 0; x < g.order() && invariant[c]; ++x)
      invariant[c] = h1n.class_of(conjugate_action(g, a, n, x, h1n.classes[c])) == c;
  r.h1_normal_invariant = static_cast<std::size_t>(std::count(invariant.begin(), invariant.end(), true));

  MapReport inf1{"inflation_1", {}}, res{"restriction", {}}, del{"delta", {}}, inf2{"inflation_2", {}};
  for (const auto& c : h1q.classes) inf1.images.push_back(h1g.class_of(inflation(q, an, c, g.order())));
  for (const auto& c : h1g.classes) res.images.push_back(h1n.class_of(restriction(n, c)));
  r.delta_independent = true;
  for (std::size_t c = 0; c < h1n.order(); ++c) {
    if (!invariant[c]) {
      del.images.push_back(none);
      continue;
    }
    auto cr = connecting_delta(g, a, n, q, an, h1n.classes[c]);
    r.delta_independent = r.delta_independent && cr.independent;
    del.images.push_back(h2q.class_of(cr.delta));
  }
  for (const auto& c : h2q.classes) inf2.images.push_back(h2g.class_of(inflation(q, an, c, g.order())));

  r.inflation1_injective = kernel_of(inf1.images) == std::vector<std::size_t>{0};
  r.exact_at_h1_group = kernel_of(res.images) == image_of(inf1.images);
  bool res_lands_invariant = std::all_of(res.images.begin(), res.images.end(), [&](std::size_t c) { return invariant[c]; });
  r.exact_at_h1_normal = res_lands_invariant && kernel_of(del.images) == image_of(res.images);
  r.exact_at_h2_quotient = kernel_of(inf2.images) == image_of(del.images);
  r.maps = {inf1, res, del, inf2};
  return r;
}

// ---------------------------------------------------------------- module sequences

void validate_sequence(const FiniteGroup& g, const ModuleSequence& s) {
  auto check_hom = [&](const FiniteModule& src, const FiniteModule& dst, const std::vector<Elem>& f, const char* name) {
    if (f.size() != src.order()) throw Error("dimension_mismatch", std::string(name) + " has wrong size");
    for (Elem x : f)
      if (x >= dst.order()) throw Error("index_out_of_range", std::string(name) + " value out of range");
    for (Elem x = 0; x < src.order(); ++x)
      for (Elem y = 0; y < src.order(); ++y)
        if (f[src.add(x, y)] != dst.add(f[x], f[y]))
          throw Error("not_equivariant", std::string(name) + " is not additive at " + pair_str(x, y));
    for (Elem t = 0; t < g.order(); ++t)
      for (Elem x = 0; x < src.order(); ++x)
        if (f[src.act(t, x)] != dst.act(t, f[x]))
          throw Error("not_equivariant", std::string(name) + " does not commute with " + std::to_string(t));
  };
  check_hom(s.a1, s.a2, s.i, "i");
  check_hom(s.a2, s.a3, s.pi, "pi");
  std::set<Elem> im_i(s.i.begin(), s.i.end());
  if (im_i.size() != s.a1.order()) throw Error("not_exact", "i is not injective");
  std::set<Elem> im_pi(s.pi.begin(), s.pi.end());
  if (im_pi.size() != s.a3.order()) throw Error("not_exact", "pi is not surjective");
  for (Elem y = 0; y < s.a2.order(); ++y)
    if ((s.pi[y] == 0) != (im_i.count(y) == 1)) throw Error("not_exact", "im i != ker pi at " + std::to_string(y));
}

SesConnecting module_ses_connecting(const FiniteGroup& g, const ModuleSequence& s, std::size_t p) {
  validate_sequence(g, s);
  const auto h3 = group_cohomology(g, s.a3, p);
  const auto h2 = group_cohomology(g, s.a2, p);
  const auto h1 = group_cohomology(g, s.a1, p + 1);
  std::vector<Elem> low(s.a3.order(), s.a2.order()), high(s.a3.order(), 0);
  for (Elem y = 0; y < s.a2.order(); ++y) {
    low[s.pi[y]] = std::min(low[s.pi[y]], y);
    high[s.pi[y]] = std::max(high[s.pi[y]], y);
  }
  high[0] = 0;  // keeps lifts normalized
  std::vector<std::size_t> i_inv(s.a2.order(), s.a1.order());
  for (Elem x = 0; x < s.a1.order(); ++x) i_inv[s.i[x]] = x;

  auto delta = [&](const GroupCochain& f, const std::vector<Elem>& section) {
    GroupCochain lift(p, g.order());
    for (std::size_t k = 0; k < lift.values().size(); ++k) lift.values()[k] = section[f.values()[k]];
    const auto d = group_differential(g, s.a2, lift);
    GroupCochain out(p + 1, g.order());
    for (std::size_t k = 0; k < d.values().size(); ++k) {
      if (i_inv[d.values()[k]] == s.a1.order()) throw Error("internal_error", "d(lift) leaves the image of i");
      out.values()[k] = i_inv[d.values()[k]];
    }
    return h1.class_of(out);
  };

  SesConnecting out;
  out.degree = p;
  out.section_independent = true;
  for (const auto& c : h3.classes) {
    const std::size_t k = delta(c, low);
    out.section_independent = out.section_independent && delta(c, high) == k;
    out.images.push_back(k);
  }
  std::vector<std::size_t> push;
  for (const auto& c : h2.classes) {
    GroupCochain pc(p, g.order());
    for (std::size_t k = 0; k < pc.values().size(); ++k) pc.values()[k] = s.pi[c.values()[k]];
    push.push_back(h3.class_of(pc));
  }
  out.exact_at_h_a3 = kernel_of(out.images) == image_of(push);
  return out;
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const FiniteGroup& g) { return {{"order", g.order()}, {"mul", g.table()}}; }

FiniteGroup group_from_json(const nlohmann::json& j) {
  try {
    Table t = j.at("mul").get<Table>();
    if (j.contains("order") && j.at("order").get<std::size_t>() != t.size())
      throw Error("parse_error", "order does not match the table");
    return FiniteGroup::from_table(std::move(t));
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_error", e.what());
  }
}

nlohmann::json to_json(const FiveTermReport& r) {
  nlohmann::json maps = nlohmann::json::object();
  for (const auto& m : r.maps) {
    nlohmann::json im = nlohmann::json::array();
    for (auto v : m.images) {
      if (v == std::numeric_limits<std::size_t>::max()) im.push_back(nullptr);
      else im.push_back(v);
    }
    maps[m.name] = im;
  }
  return {{"status", r.status()},
          {"orders",
           {{"H1(G/N,A^N)", r.h1_quotient},
            {"H1(G,A)", r.h1_group},
            {"H1(N,A)^G", r.h1_normal_invariant},
            {"H2(G/N,A^N)", r.h2_quotient},
            {"H2(G,A)", r.h2_group}}},
          {"inflation1_injective", r.inflation1_injective},
          {"exact_at_H1(G,A)", r.exact_at_h1_group},
          {"exact_at_H1(N,A)^G", r.exact_at_h1_normal},
          {"exact_at_H2(G/N,A^N)", r.exact_at_h2_quotient},
          {"delta_well_defined", r.delta_independent},
          {"degenerate", r.degenerate},
          {"maps", maps}};
}

}  // namespace lwb::group
