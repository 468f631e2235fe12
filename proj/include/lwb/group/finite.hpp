#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lwb::group {

using Elem = std::size_t;
using Table = std::vector<std::vector<Elem>>;

/// Group given by its full multiplication table; mul[a][b] = ab.
class FiniteGroup {
public:
  /// Validates closure, associativity, identity and inverses. Throws
  /// "not_a_group" with the failing law and elements in the detail.
  static FiniteGroup from_table(Table mul);

  std::size_t order() const noexcept { return mul_.size(); }
  Elem identity() const noexcept { return identity_; }
  Elem mul(Elem a, Elem b) const { return mul_[a][b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  const Table& table() const noexcept { return mul_; }

  bool operator==(const FiniteGroup& o) const { return mul_ == o.mul_; }

private:
  Table mul_;
  std::vector<Elem> inv_;
  Elem identity_ = 0;
};

/// First failing triple (a, b, c) of (ab)c = a(bc), if any.
std::optional<std::array<Elem, 3>> associativity_witness(const Table& mul);

FiniteGroup trivial_group();
FiniteGroup cyclic(std::size_t n);
/// Element (g, h) has index g * |H| + h.
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);
FiniteGroup symmetric3();

struct Subgroup {
  FiniteGroup group;          // relabelled 0..k-1
  std::vector<Elem> embed;    // subgroup index -> ambient index
};
/// Throws "not_a_subgroup" if `elements` is not closed under products and inverses.
Subgroup make_subgroup(const FiniteGroup& g, std::vector<Elem> elements);
bool is_normal(const FiniteGroup& g, const Subgroup& n);

struct Quotient {
  FiniteGroup group;
  std::vector<Elem> proj;          // G -> G/N
  std::vector<Elem> transversal;   // lowest element index of each coset
};
/// Throws "not_normal".
Quotient make_quotient(const FiniteGroup& g, const Subgroup& n);

/// Finite abelian group with an action of a FiniteGroup by automorphisms.
/// Elements are 0..m-1 with 0 the zero element.
class FiniteModule {
public:
  /// add: addition table (0 must be neutral); action[g][a] = g.a.
  /// Throws "not_a_module" naming the violated law.
  static FiniteModule make(const FiniteGroup& g, Table add, Table action);
  /// Z/k1 x ... x Z/kr, element index mixed radix with the first factor slowest.
  static FiniteModule trivial(const FiniteGroup& g, const std::vector<std::size_t>& cyclic_orders);
  /// Same abelian group with action[g] given as a permutation of elements.
  static FiniteModule with_action(const FiniteGroup& g, const std::vector<std::size_t>& cyclic_orders,
                                  const Table& action);

  std::size_t order() const noexcept { return add_.size(); }
  std::size_t group_order() const noexcept { return act_.size(); }
  Elem add(Elem a, Elem b) const { return add_[a][b]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add_[a][neg_[b]]; }
  Elem act(Elem g, Elem a) const { return act_[g][a]; }
  const Table& addition() const noexcept { return add_; }
  const Table& action() const noexcept { return act_; }

  /// Restriction of the action along a group homomorphism h -> g (e.g. a subgroup embedding).
  FiniteModule pulled_back(const FiniteGroup& h, const std::vector<Elem>& hom) const;

private:
  Table add_;
  std::vector<Elem> neg_;
  Table act_;
};

/// Fixed points A^N with the induced G/N action, embedded in A.
struct FixedSubmodule {
  FiniteModule module;          // over the quotient group
  std::vector<Elem> embed;      // A^N index -> A index
};
FixedSubmodule fixed_submodule(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n, const Quotient& q);

/// Normalized p-cochain G^p -> A, stored densely; index of (g_1..g_p) is mixed
/// radix base |G| with g_1 slowest.
class GroupCochain {
public:
  GroupCochain(std::size_t degree, std::size_t group_order);

  std::size_t degree() const noexcept { return degree_; }
  std::size_t group_order() const noexcept { return n_; }
  Elem operator()(const std::vector<Elem>& args) const { return values_[index(args)]; }
  void set(const std::vector<Elem>& args, Elem v) { values_[index(args)] = v; }
  const std::vector<Elem>& values() const noexcept { return values_; }
  std::vector<Elem>& values() noexcept { return values_; }

  std::size_t index(const std::vector<Elem>& args) const;
  std::vector<Elem> args(std::size_t index) const;
  /// Zero whenever some argument is `identity`.
  bool is_normalized(Elem identity) const;

  bool operator==(const GroupCochain& o) const { return degree_ == o.degree_ && values_ == o.values_; }
  bool operator<(const GroupCochain& o) const { return values_ < o.values_; }

private:
  std::size_t degree_;
  std::size_t n_;
  std::vector<Elem> values_;
};

GroupCochain zero_cochain(const FiniteGroup& g, std::size_t p);

/// (d_G f)(g_0..g_p) = g_0.f(g_1..g_p) + sum_{i=1}^p (-1)^i f(..g_{i-1}g_i..) + (-1)^{p+1} f(g_0..g_{p-1}).
GroupCochain group_differential(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f);
GroupCochain add(const FiniteModule& a, const GroupCochain& x, const GroupCochain& y);
GroupCochain subtract(const FiniteModule& a, const GroupCochain& x, const GroupCochain& y);
bool is_cocycle(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f);

inline constexpr std::uint64_t kDefaultSearchCap = std::uint64_t{1} << 20;

/// Every normalized p-cochain, or "undecided_capped" if there are more than `cap`.
std::vector<GroupCochain> all_normalized_cochains(const FiniteGroup& g, const FiniteModule& a, std::size_t p,
                                                  std::uint64_t cap = kDefaultSearchCap);

/// H^p by exhaustive enumeration. classes[k] is one cocycle per class; class 0 is zero.
struct GroupCohomology {
  std::size_t degree = 0;
  std::size_t cocycle_count = 0;
  std::size_t coboundary_count = 0;
  std::vector<GroupCochain> classes;
  std::map<std::vector<Elem>, std::size_t> class_of_cocycle;  // values -> class index

  std::size_t order() const { return classes.size(); }
  /// Throws "not_a_cocycle" if f is not in the enumerated cocycle set.
  std::size_t class_of(const GroupCochain& f) const;
};
GroupCohomology group_cohomology(const FiniteGroup& g, const FiniteModule& a, std::size_t p,
                                 std::uint64_t cap = kDefaultSearchCap);

/// A x_f G with (a,g)(a',g') = (a + g.a' + f(g,g'), gg'); element (a,g) has index a * |G| + g.
struct Extension {
  FiniteGroup group;
  std::size_t group_order = 0;
  Elem encode(Elem a, Elem g) const { return a * group_order + g; }
  Elem first(Elem x) const { return x / group_order; }
  Elem second(Elem x) const { return x % group_order; }
};

/// The multiplication table of A x_f G without any validation.
Table extension_table(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f);

/// Throws "not_normalized" or "not_associative" with the first G-triple where the
/// cocycle identity fails. On success verifies the inversion formula
/// (a,g)^-1 = (-g^-1.(a + f(g,g^-1)), g^-1), the conjugation formula
/// (a,g)(a',g')(a,g)^-1 = (a + g.a' - gg'g^-1.a + f(g,g') - f(gg'g^-1,g), gg'g^-1),
/// and that conjugation on the kernel A is the G-action ("internal_error" otherwise).
Extension build_extension(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f);

enum class SearchStatus { found, not_found, undecided_capped };

struct EquivalenceResult {
  SearchStatus status = SearchStatus::not_found;
  std::optional<GroupCochain> h;  // f1 - f2 = d_G h
};
EquivalenceResult extensions_equivalent(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f1,
                                        const GroupCochain& f2, std::uint64_t cap = kDefaultSearchCap);

/// Searches isomorphisms A x_f1 G -> A x_f2 G of the form (a,g) -> (a + h(g), g)
/// by checking the full multiplication tables.
EquivalenceResult direct_isomorphism_search(const FiniteGroup& g, const FiniteModule& a, const GroupCochain& f1,
                                            const GroupCochain& f2, std::uint64_t cap = kDefaultSearchCap);

/// (q*f)(g_1..g_p) = f(g_1N..g_pN), values pushed through the A^N embedding.
GroupCochain inflation(const Quotient& q, const FixedSubmodule& an, const GroupCochain& f, std::size_t g_order);
/// Literal restriction to the subgroup.
GroupCochain restriction(const Subgroup& n, const GroupCochain& f);

/// (g.f)(n) = g.f(g^-1 n g) for a 1-cochain on N.
GroupCochain conjugate_action(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n, Elem x,
                              const GroupCochain& f);

struct ConnectingResult {
  GroupCochain delta;          // 2-cocycle on G/N with values in A^N
  GroupCochain delta_alt;      // same from the highest-index transversal
  bool independent = false;    // delta and delta_alt are cohomologous
};
/// Transgression H^1(N,A)^G -> H^2(G/N, A^N). Throws "not_invariant"
/// when no alpha(x) with d_N alpha(x) = x.f - f exists for some coset representative.
ConnectingResult connecting_delta(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n, const Quotient& q,
                                  const FixedSubmodule& an, const GroupCochain& f);

struct MapReport {
  std::string name;
  std::vector<std::size_t> images;  // class index -> class index
};

struct FiveTermReport {
  std::size_t h1_quotient = 0, h1_group = 0, h1_normal_invariant = 0, h2_quotient = 0, h2_group = 0;
  bool inflation1_injective = false;
  bool exact_at_h1_group = false;      // ker R = im I
  bool exact_at_h1_normal = false;     // ker delta = im R
  bool exact_at_h2_quotient = false;   // ker I = im delta
  bool delta_independent = false;
  bool degenerate = false;             // N = G
  std::vector<MapReport> maps;
  bool exact() const {
    return inflation1_injective && exact_at_h1_group && exact_at_h1_normal && exact_at_h2_quotient && delta_independent;
  }
  std::string status() const;  // "exact", "degenerate_valid", or "not_exact"
};
FiveTermReport five_term_check(const FiniteGroup& g, const FiniteModule& a, const Subgroup& n);

/// A1 -i-> A2 -pi-> A3 as element maps of G-modules.
struct ModuleSequence {
  FiniteModule a1, a2, a3;
  std::vector<Elem> i, pi;
};
/// Throws "not_equivariant" / "not_exact" for bad data.
void validate_sequence(const FiniteGroup& g, const ModuleSequence& s);

struct SesConnecting {
  std::size_t degree = 0;
  std::vector<std::size_t> images;  // class in H^p(G,A3) -> class in H^{p+1}(G,A1)
  bool section_independent = false;
  bool exact_at_h_a3 = false;       // im pi_* = ker delta
};
SesConnecting module_ses_connecting(const FiniteGroup& g, const ModuleSequence& s, std::size_t p);

/// {"order": n, "mul": [[...]]}
nlohmann::json to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FiveTermReport& r);

}  // namespace lwb::group
