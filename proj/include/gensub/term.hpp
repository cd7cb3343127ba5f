#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "gensub/errors.hpp"

namespace gensub {

/// Syntactic kind of a type argument. Arguments are stored in canonical
/// interval form; the kind drives printing ("?" rather than "[Null,Object]")
/// and the one identification the paper policy leaves open (exact Object
/// versus "? super Object").
enum class ArgKind { Exact, Upper, Lower, Unbounded, Interval };

/// Which identifications the wildcards operator performs. Paper keeps
/// "? super Object" distinct from the exact argument Object (3n-2 elements on
/// a bounded poset of n); Semantic quotients by mutual containment (3n-3).
enum class WcPolicy { Paper, Semantic };

enum class ArgMode { Wildcards, Intervals };

inline constexpr std::string_view kObjectName = "Object";
inline constexpr std::string_view kNullName = "Null";

struct parse_error : error {
  parse_error(const std::string& what, std::size_t pos) : error(what), position(pos) {}
  std::size_t position;
};

class TypeTerm;
struct TypeArgument;

namespace detail {
struct TermNode;
}

/// A ground type expression: a non-generic class name, a generic class
/// applied to one argument, or a cofree type C<!>. Immutable value type with
/// structural equality. Arity correctness is not enforced here; it is what
/// the admittability check of module analysis decides against a class table.
class TypeTerm {
 public:
  enum class Kind { Plain, Applied, Cofree };

  static TypeTerm plain(std::string name);
  static TypeTerm applied(std::string generic_name, TypeArgument arg);
  static TypeTerm cofree(std::string generic_name);

  Kind kind() const;
  const std::string& name() const;
  const TypeArgument& argument() const;  // valid only when kind() == Applied
  int depth() const;                     // nesting depth of the term
  std::string str() const;

  static int compare(const TypeTerm& a, const TypeTerm& b);
  friend bool operator==(const TypeTerm& a, const TypeTerm& b) { return compare(a, b) == 0; }
  friend bool operator<(const TypeTerm& a, const TypeTerm& b) { return compare(a, b) < 0; }

 private:
  explicit TypeTerm(std::shared_ptr<const detail::TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

/// A type argument in interval form [lower, upper]. Wildcards and exact
/// arguments are the special cases [Null,T], [T,Object], [T,T].
struct TypeArgument {
  TypeTerm lower;
  TypeTerm upper;
  ArgKind kind;

  static TypeArgument exact(TypeTerm t);
  static TypeArgument upper_wildcard(TypeTerm t);  // ? extends T == [Null, T]
  static TypeArgument lower_wildcard(TypeTerm t);  // ? super T   == [T, Object]
  static TypeArgument unbounded();                 // ?           == [Null, Object]
  static TypeArgument interval(TypeTerm lo, TypeTerm hi);

  std::string str() const;

  static int compare(const TypeArgument& a, const TypeArgument& b);
  friend bool operator==(const TypeArgument& a, const TypeArgument& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<(const TypeArgument& a, const TypeArgument& b) {
    return compare(a, b) < 0;
  }
};

namespace detail {
struct TermNode {
  TypeTerm::Kind kind;
  std::string name;
  std::unique_ptr<const TypeArgument> arg;  // Applied only
  int depth;
};
}  // namespace detail

inline TypeTerm TypeTerm::plain(std::string name) {
  return TypeTerm(std::make_shared<detail::TermNode>(
      detail::TermNode{Kind::Plain, std::move(name), nullptr, 0}));
}

inline TypeTerm TypeTerm::cofree(std::string generic_name) {
  return TypeTerm(std::make_shared<detail::TermNode>(
      detail::TermNode{Kind::Cofree, std::move(generic_name), nullptr, 0}));
}

inline TypeTerm TypeTerm::applied(std::string generic_name, TypeArgument arg) {
  int d = 1 + std::max(arg.lower.depth(), arg.upper.depth());
  return TypeTerm(std::make_shared<detail::TermNode>(detail::TermNode{
      Kind::Applied, std::move(generic_name),
      std::make_unique<const TypeArgument>(std::move(arg)), d}));
}

inline TypeTerm::Kind TypeTerm::kind() const { return node_->kind; }
inline const std::string& TypeTerm::name() const { return node_->name; }
inline const TypeArgument& TypeTerm::argument() const { return *node_->arg; }
inline int TypeTerm::depth() const { return node_->depth; }

inline int TypeTerm::compare(const TypeTerm& a, const TypeTerm& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
  if (a.kind() == Kind::Applied) return TypeArgument::compare(a.argument(), b.argument());
  return 0;
}

inline std::string TypeTerm::str() const {
  switch (kind()) {
    case Kind::Plain:
      return name();
    case Kind::Cofree:
      return name() + "<!>";
    case Kind::Applied:
      return name() + "<" + argument().str() + ">";
  }
  return {};
}

inline std::ostream& operator<<(std::ostream& os, const TypeTerm& t) { return os << t.str(); }

inline TypeArgument TypeArgument::exact(TypeTerm t) {
  return TypeArgument{t, t, ArgKind::Exact};
}
inline TypeArgument TypeArgument::upper_wildcard(TypeTerm t) {
  return TypeArgument{TypeTerm::plain(std::string(kNullName)), std::move(t), ArgKind::Upper};
}
inline TypeArgument TypeArgument::lower_wildcard(TypeTerm t) {
  return TypeArgument{std::move(t), TypeTerm::plain(std::string(kObjectName)), ArgKind::Lower};
}
inline TypeArgument TypeArgument::unbounded() {
  return TypeArgument{TypeTerm::plain(std::string(kNullName)),
                      TypeTerm::plain(std::string(kObjectName)), ArgKind::Unbounded};
}
inline TypeArgument TypeArgument::interval(TypeTerm lo, TypeTerm hi) {
  return TypeArgument{std::move(lo), std::move(hi), ArgKind::Interval};
}

inline int TypeArgument::compare(const TypeArgument& a, const TypeArgument& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (int c = TypeTerm::compare(a.lower, b.lower); c != 0) return c;
  return TypeTerm::compare(a.upper, b.upper);
}

inline std::string TypeArgument::str() const {
  switch (kind) {
    case ArgKind::Unbounded:
      return "?";
    case ArgKind::Exact:
      return lower.str();
    case ArgKind::Upper:
      return "? extends " + upper.str();
    case ArgKind::Lower:
      return "? super " + lower.str();
    case ArgKind::Interval:
      return "[" + lower.str() + "," + upper.str() + "]";
  }
  return {};
}

inline std::ostream& operator<<(std::ostream& os, const TypeArgument& a) { return os << a.str(); }

inline bool is_object(const TypeTerm& t) {
  return t.kind() == TypeTerm::Kind::Plain && t.name() == kObjectName;
}
inline bool is_null(const TypeTerm& t) {
  return t.kind() == TypeTerm::Kind::Plain && t.name() == kNullName;
}

/// Canonical form of an argument. Degenerate wildcard and interval shapes are
/// retagged so that one semantic argument has one representation; the single
/// exception is "? super Object", which the Paper policy keeps distinct from
/// the exact argument Object.
inline TypeArgument canonical(TypeArgument a, WcPolicy policy) {
  if (is_null(a.lower) && is_object(a.upper)) {
    a.kind = ArgKind::Unbounded;
    return a;
  }
  if (a.lower == a.upper) {
    switch (a.kind) {
      case ArgKind::Upper:  // ? extends Null
      case ArgKind::Interval:
        a.kind = ArgKind::Exact;
        break;
      case ArgKind::Lower:  // ? super Object
        if (policy == WcPolicy::Semantic) a.kind = ArgKind::Exact;
        break;
      default:
        break;
    }
    return a;
  }
  if (a.kind == ArgKind::Interval) {
    if (is_null(a.lower)) a.kind = ArgKind::Upper;
    else if (is_object(a.upper)) a.kind = ArgKind::Lower;
  }
  return a;
}

/// Replaces every plain occurrence of `var` in a bound expression and
/// re-canonicalizes the arguments along the way.
inline TypeTerm substitute(const TypeTerm& bound, std::string_view var,
                           const TypeTerm& replacement, WcPolicy policy) {
  switch (bound.kind()) {
    case TypeTerm::Kind::Plain:
      return bound.name() == var ? replacement : bound;
    case TypeTerm::Kind::Cofree:
      return bound;
    case TypeTerm::Kind::Applied: {
      const TypeArgument& a = bound.argument();
      TypeArgument sub{substitute(a.lower, var, replacement, policy),
                       substitute(a.upper, var, replacement, policy), a.kind};
      return TypeTerm::applied(bound.name(), canonical(std::move(sub), policy));
    }
  }
  return bound;
}

/// True iff `var` occurs in the bound expression, i.e. the bound is an
/// F-bound.
inline bool mentions(const TypeTerm& bound, std::string_view var) {
  switch (bound.kind()) {
    case TypeTerm::Kind::Plain:
      return bound.name() == var;
    case TypeTerm::Kind::Cofree:
      return false;
    case TypeTerm::Kind::Applied:
      return mentions(bound.argument().lower, var) || mentions(bound.argument().upper, var);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

/// Recursive-descent scanner shared by the type-term parser and the class
/// table DSL parser.
class TermScanner {
 public:
  TermScanner(std::string_view src, std::size_t start, WcPolicy policy)
      : src_(src), pos_(start), policy_(policy) {}

  std::size_t pos() const { return pos_; }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= src_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  static bool name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::optional<std::string> try_name() {
    skip_ws();
    if (pos_ >= src_.size() || !name_start(src_[pos_])) return std::nullopt;
    std::size_t start = pos_;
    while (pos_ < src_.size() && name_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string expect_name(const char* what) {
    auto n = try_name();
    if (!n) fail(std::string("expected ") + what);
    return *n;
  }

  /// True if the next characters are a name equal to `kw`; consumes it.
  bool consume_keyword(std::string_view kw) {
    skip_ws();
    std::size_t save = pos_;
    auto n = try_name();
    if (n && *n == kw) return true;
    pos_ = save;
    return false;
  }

  /// An argument list opener '<' — but not the start of "<:" or "<=".
  bool at_argument_open() {
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != '<') return false;
    if (pos_ + 1 < src_.size() && (src_[pos_ + 1] == ':' || src_[pos_ + 1] == '=')) return false;
    return true;
  }

  TypeTerm parse_term() {
    std::string name = expect_name("a class name");
    if (!at_argument_open()) return TypeTerm::plain(std::move(name));
    expect('<');
    if (consume('!')) {
      expect('>');
      return TypeTerm::cofree(std::move(name));
    }
    TypeArgument arg = parse_argument();
    expect('>');
    return TypeTerm::applied(std::move(name), std::move(arg));
  }

  TypeArgument parse_argument() {
    skip_ws();
    if (consume('?')) {
      if (consume_keyword("extends"))
        return canonical(TypeArgument::upper_wildcard(parse_term()), policy_);
      if (consume_keyword("super"))
        return canonical(TypeArgument::lower_wildcard(parse_term()), policy_);
      return TypeArgument::unbounded();
    }
    if (consume('[')) {
      TypeTerm lo = parse_term();
      expect(',');
      TypeTerm hi = parse_term();
      expect(']');
      return canonical(TypeArgument::interval(std::move(lo), std::move(hi)), policy_);
    }
    return canonical(TypeArgument::exact(parse_term()), policy_);
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg + " at offset " + std::to_string(pos_), pos_);
  }

 private:
  std::string_view src_;
  std::size_t pos_;
  WcPolicy policy_;
};

}  // namespace detail

inline TypeTerm parse_type_term(std::string_view text, WcPolicy policy = WcPolicy::Paper) {
  detail::TermScanner s(text, 0, policy);
  TypeTerm t = s.parse_term();
  if (!s.at_end()) s.fail("trailing input after type term");
  return t;
}

inline TypeArgument parse_type_argument(std::string_view text,
                                        WcPolicy policy = WcPolicy::Paper) {
  detail::TermScanner s(text, 0, policy);
  TypeArgument a = s.parse_argument();
  if (!s.at_end()) s.fail("trailing input after type argument");
  return a;
}

/// A parsed query line: either a subtyping question "T1 <: T2" between type
/// terms, or a containment question "A <= B" (also accepted: "A ⊑ B")
/// between type arguments.
struct Query {
  enum class Rel { Subtype, Containment };
  Rel rel;
  TypeArgument lhs;  // Exact-kind arguments carry plain terms for Rel::Subtype
  TypeArgument rhs;

  const TypeTerm& lhs_term() const { return lhs.lower; }
  const TypeTerm& rhs_term() const { return rhs.lower; }
};

inline Query parse_query(std::string_view text, WcPolicy policy = WcPolicy::Paper) {
  detail::TermScanner s(text, 0, policy);
  TypeArgument lhs = s.parse_argument();
  Query::Rel rel;
  if (s.consume('<')) {
    if (s.consume(':')) rel = Query::Rel::Subtype;
    else if (s.consume('=')) rel = Query::Rel::Containment;
    else s.fail("expected '<:' or '<='");
  } else if (s.consume('\xE2')) {  // UTF-8 for the containment sign
    if (!(s.consume('\x8A') && s.consume('\x91'))) s.fail("expected a relation symbol");
    rel = Query::Rel::Containment;
  } else {
    s.fail("expected '<:' or '<='");
  }
  TypeArgument rhs = s.parse_argument();
  if (!s.at_end()) s.fail("trailing input after query");
  if (rel == Query::Rel::Subtype &&
      (lhs.kind != ArgKind::Exact || rhs.kind != ArgKind::Exact)) {
    throw parse_error("'<:' relates types; use '<=' between type arguments", 0);
  }
  return Query{rel, std::move(lhs), std::move(rhs)};
}

}  // namespace gensub
