#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gensub/poset.hpp"
#include "gensub/term.hpp"

namespace gensub {

struct Diagnostic {
  int line = 0;  // 1-based source line; 0 for table-level problems
  std::string message;
};

/// One class declaration. Bounds are type expressions over class names and
/// the parameter variable (F-bounds mention the variable); they default to
/// [Null, Object] and are meaningful only when arity == 1.
struct ClassDecl {
  std::string name;
  int arity = 0;  // 0 or 1
  std::string superclass = std::string(kObjectName);
  std::string param;  // parameter variable name, arity == 1 only
  TypeTerm lower_bound = TypeTerm::plain(std::string(kNullName));
  TypeTerm upper_bound = TypeTerm::plain(std::string(kObjectName));
  int line = 0;

  bool has_default_bounds() const {
    return is_null(lower_bound) && is_object(upper_bound);
  }

  friend bool operator==(const ClassDecl& a, const ClassDecl& b) {
    return a.name == b.name && a.arity == b.arity && a.superclass == b.superclass &&
           a.param == b.param && a.lower_bound == b.lower_bound && a.upper_bound == b.upper_bound;
  }
};

struct ParseResult;

/// A validated set of class declarations plus the implicit classes Object
/// (top, arity 0) and Null (bottom, arity 0). Immutable; the subclassing
/// poset is materialized at construction.
class ClassTable {
 public:
  /// The subclassing poset C with Object on top and Null at the bottom,
  /// together with the element ids of the generic classes (the subset C_g).
  struct Subclassing {
    BoundedPoset bounded;
    std::vector<std::size_t> generic_elems;
  };

  static ParseResult parse(std::string_view source);
  static ParseResult from_decls(std::vector<ClassDecl> decls);

  const std::vector<ClassDecl>& decls() const { return decls_; }

  bool is_declared(std::string_view name) const {
    return name == kObjectName || name == kNullName || index_.count(std::string(name)) != 0;
  }

  std::optional<int> arity_of(std::string_view name) const {
    if (name == kObjectName || name == kNullName) return 0;
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return decls_[it->second].arity;
  }

  bool is_generic(std::string_view name) const { return arity_of(name) == 1; }

  const ClassDecl* find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &decls_[it->second];
  }

  std::vector<std::string> generic_names() const {
    std::vector<std::string> out;
    for (const auto& d : decls_)
      if (d.arity == 1) out.push_back(d.name);
    return out;
  }

  /// Every class name of the table, Object first, Null last.
  std::vector<std::string> all_names() const {
    std::vector<std::string> out{std::string(kObjectName)};
    for (const auto& d : decls_) out.push_back(d.name);
    out.push_back(std::string(kNullName));
    return out;
  }

  const Subclassing& subclassing() const { return subclassing_; }

  /// Declared order between class names (reflexive-transitive).
  bool subclass_leq(std::string_view a, std::string_view b) const {
    const Poset& p = subclassing_.bounded.poset;
    return p.leq(p.at(a), p.at(b));
  }

  /// Pretty-print back to DSL form; parsing the output yields an equal table.
  std::string print() const {
    std::string out;
    for (const auto& d : decls_) {
      out += "class " + d.name;
      if (d.arity == 1) {
        out += "<" + d.param;
        if (!is_object(d.upper_bound)) out += " extends " + d.upper_bound.str();
        if (!is_null(d.lower_bound)) out += " super " + d.lower_bound.str();
        out += ">";
      }
      out += " extends " + d.superclass + "\n";
    }
    return out;
  }

 private:
  ClassTable() = default;
  static void validate(const std::vector<ClassDecl>& decls, std::vector<Diagnostic>& diags);
  static void check_bound_expr(const TypeTerm& bound, const ClassDecl& decl,
                               const std::unordered_map<std::string, std::size_t>& index,
                               const std::vector<ClassDecl>& decls, std::vector<Diagnostic>& diags);
  void build_subclassing();

  std::vector<ClassDecl> decls_;
  std::unordered_map<std::string, std::size_t> index_;
  Subclassing subclassing_;
};

struct ParseResult {
  std::optional<ClassTable> table;  // engaged iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

namespace detail {

/// Replaces // comments with spaces so offsets and line numbers survive.
inline std::string strip_comments(std::string_view src) {
  std::string out(src);
  bool in_comment = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (in_comment) {
      if (out[i] == '\n') in_comment = false;
      else out[i] = ' ';
    } else if (out[i] == '/' && i + 1 < out.size() && out[i + 1] == '/') {
      in_comment = true;
      out[i] = ' ';
    }
  }
  return out;
}

inline int line_of(std::string_view src, std::size_t pos) {
  int line = 1;
  for (std::size_t i = 0; i < pos && i < src.size(); ++i)
    if (src[i] == '\n') ++line;
  return line;
}

}  // namespace detail

inline ParseResult ClassTable::parse(std::string_view source) {
  std::string clean = detail::strip_comments(source);
  std::vector<ClassDecl> decls;
  std::vector<Diagnostic> diags;

  detail::TermScanner sc(clean, 0, WcPolicy::Paper);
  auto diag_here = [&](const std::string& msg) {
    diags.push_back({detail::line_of(clean, sc.pos()), msg});
  };
  auto skip_to_next_decl = [&] {
    // Error recovery: resume at the next "class" keyword.
    while (!sc.at_end()) {
      if (sc.consume_keyword("class")) return true;
      if (!sc.try_name()) sc.consume(sc.peek());
    }
    return false;
  };

  bool at_keyword = false;  // set when recovery already consumed "class"
  for (;;) {
    if (!at_keyword) {
      if (sc.at_end()) break;
      if (!sc.consume_keyword("class")) {
        diag_here("expected 'class'");
        if (!skip_to_next_decl()) break;
      }
    }
    at_keyword = false;
    ClassDecl d;
    d.line = detail::line_of(clean, sc.pos());
    try {
      d.name = sc.expect_name("a class name");
      if (sc.at_argument_open()) {
        sc.expect('<');
        d.arity = 1;
        d.param = sc.expect_name("a type parameter name");
        bool saw_upper = false, saw_lower = false;
        for (;;) {
          if (sc.consume_keyword("extends")) {
            if (saw_upper) diag_here("duplicate upper bound on type parameter");
            d.upper_bound = sc.parse_term();
            saw_upper = true;
          } else if (sc.consume_keyword("super")) {
            if (saw_lower) diag_here("duplicate lower bound on type parameter");
            d.lower_bound = sc.parse_term();
            saw_lower = true;
          } else {
            break;
          }
        }
        sc.expect('>');
      }
      if (sc.consume_keyword("extends")) {
        d.superclass = sc.expect_name("a superclass name");
        if (sc.at_argument_open()) {
          diags.push_back({d.line,
                           "superclass of '" + d.name +
                               "' takes type arguments; only argument pass-through "
                               "('class C<X> extends D') is supported"});
          sc.expect('<');
          sc.parse_argument();  // consume and discard
          sc.expect('>');
        }
      }
      sc.consume(';');
      decls.push_back(std::move(d));
    } catch (const parse_error& e) {
      diags.push_back({detail::line_of(clean, e.position), e.what()});
      if (!skip_to_next_decl()) break;
      at_keyword = true;
    }
  }

  if (!diags.empty()) return ParseResult{std::nullopt, std::move(diags)};
  return from_decls(std::move(decls));
}

inline ParseResult ClassTable::from_decls(std::vector<ClassDecl> decls) {
  std::vector<Diagnostic> diags;
  // The implicit top may be declared bare; drop the redundant declaration.
  std::erase_if(decls, [&](const ClassDecl& d) {
    if (d.name != kObjectName) return false;
    if (d.arity != 0 || d.superclass != kObjectName)
      diags.push_back({d.line, "class Object is implicit and cannot be redefined"});
    return true;
  });
  validate(decls, diags);
  if (!diags.empty()) return ParseResult{std::nullopt, std::move(diags)};

  ClassTable t;
  t.decls_ = std::move(decls);
  for (std::size_t i = 0; i < t.decls_.size(); ++i) t.index_.emplace(t.decls_[i].name, i);
  t.build_subclassing();
  return ParseResult{std::move(t), {}};
}

inline void ClassTable::validate(const std::vector<ClassDecl>& decls,
                                 std::vector<Diagnostic>& diags) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const ClassDecl& d = decls[i];
    if (d.name == kNullName) {
      diags.push_back({d.line, "class Null is implicit and cannot be declared"});
      continue;
    }
    if (!index.emplace(d.name, i).second)
      diags.push_back({d.line, "duplicate declaration of class '" + d.name + "'"});
  }

  auto arity_of = [&](std::string_view name) -> std::optional<int> {
    if (name == kObjectName || name == kNullName) return 0;
    auto it = index.find(std::string(name));
    if (it == index.end()) return std::nullopt;
    return decls[it->second].arity;
  };

  for (const ClassDecl& d : decls) {
    if (d.superclass == kNullName) {
      diags.push_back({d.line, "'" + d.name + "' cannot extend Null"});
      continue;
    }
    auto super_arity = arity_of(d.superclass);
    if (!super_arity) {
      diags.push_back({d.line, "unknown superclass '" + d.superclass + "' of '" + d.name + "'"});
      continue;
    }
    if (*super_arity == 1 && d.arity == 0) {
      diags.push_back({d.line, "non-generic class '" + d.name +
                                   "' cannot extend generic class '" + d.superclass + "'"});
    }
    if (d.arity == 1) {
      check_bound_expr(d.upper_bound, d, index, decls, diags);
      check_bound_expr(d.lower_bound, d, index, decls, diags);
    }
  }

  // Cycle check along superclass chains.
  std::unordered_map<std::string, int> state;  // 0 unseen, 1 in progress, 2 done
  for (const ClassDecl& d : decls) {
    std::vector<std::string> path;
    std::string cur = d.name;
    while (cur != kObjectName) {
      int& s = state[cur];
      if (s == 2) break;
      if (s == 1) {
        diags.push_back({d.line, "cyclic subclassing involving '" + cur + "'"});
        break;
      }
      s = 1;
      path.push_back(cur);
      auto it = index.find(cur);
      if (it == index.end()) break;  // unknown superclass, already diagnosed
      cur = decls[it->second].superclass;
    }
    for (const auto& n : path) state[n] = 2;
  }
}

inline void ClassTable::check_bound_expr(const TypeTerm& bound, const ClassDecl& decl,
                                         const std::unordered_map<std::string, std::size_t>& index,
                                         const std::vector<ClassDecl>& decls,
                                         std::vector<Diagnostic>& diags) {
  auto arity_of = [&](std::string_view name) -> std::optional<int> {
    if (name == kObjectName || name == kNullName) return 0;
    auto it = index.find(std::string(name));
    if (it == index.end()) return std::nullopt;
    return decls[it->second].arity;
  };
  switch (bound.kind()) {
    case TypeTerm::Kind::Plain: {
      if (bound.name() == decl.param) return;  // the parameter variable
      auto a = arity_of(bound.name());
      if (!a) {
        diags.push_back({decl.line, "unknown class '" + bound.name() + "' in a bound of '" +
                                        decl.name + "'"});
      } else if (*a == 1) {
        diags.push_back({decl.line, "arity mismatch in a bound of '" + decl.name + "': '" +
                                        bound.name() + "' is generic and needs a type argument"});
      }
      return;
    }
    case TypeTerm::Kind::Cofree: {
      auto a = arity_of(bound.name());
      if (!a || *a != 1)
        diags.push_back({decl.line, "arity mismatch in a bound of '" + decl.name + "': '" +
                                        bound.name() + "<!>' needs a generic class"});
      return;
    }
    case TypeTerm::Kind::Applied: {
      auto a = arity_of(bound.name());
      if (bound.name() == decl.param || !a || *a != 1) {
        diags.push_back({decl.line, "arity mismatch in a bound of '" + decl.name + "': '" +
                                        bound.name() + "' cannot take a type argument"});
      }
      check_bound_expr(bound.argument().lower, decl, index, decls, diags);
      check_bound_expr(bound.argument().upper, decl, index, decls, diags);
      return;
    }
  }
}

inline void ClassTable::build_subclassing() {
  std::vector<std::string> labels = all_names();
  const std::size_t object_elem = 0;
  const std::size_t null_elem = labels.size() - 1;
  std::unordered_map<std::string, std::size_t> at;
  for (std::size_t i = 0; i < labels.size(); ++i) at.emplace(labels[i], i);

  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (const ClassDecl& d : decls_) covers.emplace_back(at[d.name], at[d.superclass]);
  // Null sits below every class; transitive reduction trims this to leaves.
  for (std::size_t e = 0; e < null_elem; ++e) covers.emplace_back(null_elem, e);

  Poset p = Poset::from_covers(std::move(labels), covers);
  subclassing_.bounded = BoundedPoset{std::move(p), object_elem, null_elem};
  subclassing_.generic_elems.clear();
  for (const ClassDecl& d : decls_)
    if (d.arity == 1) subclassing_.generic_elems.push_back(at[d.name]);
}

}  // namespace gensub
