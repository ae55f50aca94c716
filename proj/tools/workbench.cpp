// workbench: command-line front end.
//
// Every verb prints one JSON report on standard output (or indented text
// with --pretty) and exits with
//   0 Verified / success, 1 Refuted, 2 Unknown within bounds, 3 input error.

#include <workbench/report.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace workbench;

namespace {

  struct Outcome {
    json   result;
    Status status = Status::Verified;
  };

  int exit_code(Status s) {
    switch (s) {
      case Status::Verified: return 0;
      case Status::Refuted: return 1;
      default: return 2;
    }
  }

  Status of(Verdict v) {
    return v == Verdict::Member ? Status::Verified
           : v == Verdict::NotMember ? Status::Refuted
                                     : Status::Unknown;
  }

  ////////////////////////////////////////////////////////////////////////
  // Loading

  Presentation presentation_at(fs::path const& p) {
    if (fs::is_directory(p)) {
      Bundle b = load_bundle(p);
      if (!b.has_presentation) throw InputError(p.string(), "bundle has no presentation.txt");
      return b.presentation;
    }
    return detail::parse_in(p, parse_presentation);
  }

  AffineFile affine_at(fs::path const& p) {
    if (fs::is_directory(p)) {
      Bundle b = load_bundle(p);
      if (b.base.monoid.size() == 0) throw InputError(p.string(), "bundle has no base.txt");
      return b.base;
    }
    return detail::parse_in(p, parse_affine);
  }

  RewriteSystem completed(Presentation const& p, Bounds const& bounds, json& result) {
    auto r = complete(p, bounds.max_rules, bounds.max_len);
    if (!std::holds_alternative<RewriteSystem>(r)) {
      result["completion"] = completion_json(p, r);
      throw Status::Unknown;
    }
    return std::get<RewriteSystem>(r);
  }

  // Integers in ambient coordinates, or a monomial such as "a1^-1 a3^2".
  IntVector affine_vector(AffineMonoid const& b, std::string const& text) {
    std::istringstream       in(text);
    std::vector<std::string> toks;
    for (std::string t; in >> t;) toks.push_back(t);
    bool numeric = !toks.empty();
    for (auto const& t : toks) {
      numeric = numeric && t.find_first_not_of("+-0123456789") == std::string::npos;
    }
    if (numeric) {
      if (toks.size() != b.ambient_rank()) {
        throw InputError("<argument>", "expected " + std::to_string(b.ambient_rank())
                                           + " integers, got " + std::to_string(toks.size()));
      }
      IntVector v;
      for (auto const& t : toks) v.emplace_back(t);
      return v;
    }
    IntVector v = zero_vector(b.ambient_rank());
    for (auto const& t : toks) {
      auto        caret = t.find('^');
      std::string name  = t.substr(0, caret);
      long long   e     = 1;
      if (caret != std::string::npos) {
        try {
          e = std::stoll(t.substr(caret + 1));
        } catch (...) {
          throw InputError("<argument>", "bad exponent in '" + t + "'");
        }
      }
      auto i = b.index(name);
      if (!i) throw InputError("<argument>", "unknown generator '" + name + "'");
      v += Integer(e) * b.generator(*i);
    }
    return v;
  }

  struct CrossedContext {
    Bundle        bundle;
    RewriteSystem rs;
    CrossedSystem cs;
  };

  CrossedContext crossed_at(fs::path const& dir, Bounds const& bounds, json& result,
                            StageTimer& time) {
    CrossedContext c;
    c.bundle = load_bundle(dir);
    if (!c.bundle.has_presentation) throw InputError(dir.string(), "bundle has no presentation.txt");
    c.rs = time("complete", [&] { return completed(c.bundle.presentation, bounds, result); });
    c.cs = time("crossed.extract", [&] { return crossed_system_of(c.bundle, c.rs, bounds); });
    return c;
  }

  fs::path resolve_replay(std::string const& name) {
    if (fs::is_directory(name)) return name;
    if (char const* env = std::getenv("WORKBENCH_EXAMPLES")) {
      if (fs::is_directory(fs::path(env) / name)) return fs::path(env) / name;
    }
    if (fs::is_directory(fs::path("examples") / name)) return fs::path("examples") / name;
#ifdef WORKBENCH_EXAMPLES_DIR
    if (fs::is_directory(fs::path(WORKBENCH_EXAMPLES_DIR) / name)) {
      return fs::path(WORKBENCH_EXAMPLES_DIR) / name;
    }
#endif
    throw InputError(name, "no bundled example of that name");
  }

  ////////////////////////////////////////////////////////////////////////
  // Text rendering for --pretty

  void render(std::ostream& os, json const& j, std::string const& indent) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string const key = j.is_object() ? it.key() + ":" : "-";
      auto const&       v   = *it;
      bool const        flat_array =
          v.is_array()
          && std::all_of(v.begin(), v.end(), [](json const& x) { return x.is_primitive(); });
      if (v.is_primitive()) {
        os << indent << key << ' ' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
      } else if (flat_array) {
        os << indent << key << ' ';
        bool first = true;
        for (auto const& x : v) {
          os << (first ? "" : ", ") << (x.is_string() ? x.get<std::string>() : x.dump());
          first = false;
        }
        os << '\n';
      } else if (v.empty()) {
        os << indent << key << (v.is_array() ? " []" : " {}") << '\n';
      } else {
        os << indent << key << '\n';
        render(os, v, indent + "  ");
      }
    }
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic workbench for monoids with monomial relations", "workbench"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(tool_version));

  Bounds      bounds;
  bool        pretty = false;
  app.add_flag("--pretty", pretty, "human-readable output instead of JSON");
  app.add_option("--max-rules", bounds.max_rules, "completion rule limit")->capture_default_str();
  app.add_option("--max-len", bounds.max_len, "completion word-length limit")->capture_default_str();
  app.add_option("--check-len", bounds.check_len, "crossed-system check length")->capture_default_str();
  app.add_option("--scan-len", bounds.scan_len, "representation/embedding scan length")
      ->capture_default_str();
  app.add_option("--radius", bounds.radius, "maximality search radius")->capture_default_str();
  app.add_option("--box", bounds.box, "maximality witness box")->capture_default_str();

  std::string              target;
  std::vector<std::string> words;
  std::size_t              enum_len = 4;
  std::string              vector_text;
  bool                     update = false;

  std::function<Outcome(json&)> action;
  auto                          verb = [&](CLI::App* sub, auto&& f) {
    sub->callback([&action, f] { action = f; });
  };

  // Rewriting.
  auto* normalize = app.add_subcommand("normalize", "normal forms of words");
  normalize->add_option("target", target, "bundle or presentation file")->required();
  normalize->add_option("words", words, "words to normalize")->required();
  verb(normalize, [&](json& timings) {
    StageTimer time(timings);
    Outcome    o;
    auto const p  = presentation_at(target);
    auto const rs = time("complete", [&] { return completed(p, bounds, o.result); });
    json       a  = json::array();
    for (auto const& w : words) {
      Word const v = p.parse_word(w);
      a.push_back({{"input", w}, {"normal_form", word_text(p, rs.rewrite(v))}});
    }
    o.result["normal_forms"] = a;
    return o;
  });

  auto* completecmd = app.add_subcommand("complete", "Knuth-Bendix completion");
  completecmd->add_option("target", target, "bundle or presentation file")->required();
  verb(completecmd, [&](json& timings) {
    StageTimer time(timings);
    Outcome    o;
    auto const p = presentation_at(target);
    auto const r = time("complete", [&] { return complete(p, bounds.max_rules, bounds.max_len); });
    o.result["completion"] = completion_json(p, r);
    o.status = std::holds_alternative<RewriteSystem>(r) ? Status::Verified : Status::Unknown;
    return o;
  });

  auto* enumerate = app.add_subcommand("enumerate", "normal forms up to a length");
  enumerate->add_option("target", target, "bundle or presentation file")->required();
  enumerate->add_option("--len", enum_len, "maximal length")->capture_default_str();
  verb(enumerate, [&](json& timings) {
    StageTimer time(timings);
    Outcome    o;
    auto const p  = presentation_at(target);
    auto const rs = time("complete", [&] { return completed(p, bounds, o.result); });
    auto const e  = time("enumerate", [&] { return enumerate_elements(rs, enum_len); });
    json       el = json::array();
    for (auto const& w : e.elements) el.push_back(word_text(p, w));
    o.result = {{"max_len", enum_len}, {"counts", e.counts}, {"elements", el}};
    return o;
  });

  // Affine monoids.
  auto* affine = app.add_subcommand("affine", "affine monoid operations");
  affine->require_subcommand(1, 1);
  auto* member_cmd = affine->add_subcommand("member", "membership with certificate");
  member_cmd->add_option("target", target, "bundle or affine file")->required();
  member_cmd->add_option("vector", vector_text, "integers or a monomial like 'a1^-1 a3'")
      ->required();
  verb(member_cmd, [&](json& timings) {
    StageTimer time(timings);
    Outcome    o;
    auto const f = affine_at(target);
    auto const v = affine_vector(f.monoid, vector_text);
    auto const r = time("member", [&] { return member(f.monoid, v); });
    o.result     = membership_json(f.monoid, v, r);
    o.status     = of(r.verdict);
    return o;
  });
  auto* primes_cmd = affine->add_subcommand("minimal-primes", "minimal primes as faces");
  primes_cmd->add_option("target", target, "bundle or affine file")->required();
  verb(primes_cmd, [&](json& timings) {
    StageTimer time(timings);
    Outcome    o;
    auto const f  = affine_at(target);
    auto const mp = time("minimal_primes", [&] { return minimal_primes(f.monoid); });
    o.result      = {{"monoid", monoid_json(f.monoid)}, {"minimal_primes", primes_json(f.monoid, mp)},
                     {"count", mp.size()}};
    return o;
  });
  auto* normal_cmd = affine->add_subcommand("check-normal", "maximal order test");
  normal_cmd->add_option("target", target, "bundle or affine file")->required();
  verb(normal_cmd, [&](json& timings) {
    StageTimer time(timings);
    Outcome    o;
    auto const f = affine_at(target);
    auto const n = time("normality", [&] { return is_maximal_order(f.monoid); });
    o.result     = normality_json(f.monoid, n);
    o.result["free_intersection_basis"] = free_basis_json(f.monoid);
    o.status = of(n.status);
    return o;
  });
  auto* spectrum_cmd = affine->add_subcommand("spectrum", "prime spectrum poset");
  spectrum_cmd->add_option("target", target, "bundle or affine file")->required();
  verb(spectrum_cmd, [&](json& timings) {
    StageTimer time(timings);
    Outcome    o;
    auto const f = affine_at(target);
    o.result     = spectrum_json(f.monoid, time("spectrum", [&] { return spectrum(f.monoid); }));
    return o;
  });

  // Groups.  A bundle's extension.txt wins over the derived extension.
  auto extension_at = [&](json& result, StageTimer& time) {
    fs::path const p = target;
    if (!fs::is_directory(p)) {
      result["source"] = "file";
      return detail::parse_in(p, parse_extension);
    }
    Bundle b = load_bundle(p);
    if (b.extension) {
      result["source"] = "extension.txt";
      return *b.extension;
    }
    result["source"] = "derived";
    if (!b.has_presentation) throw InputError(p.string(), "bundle has no presentation.txt");
    auto const rs = time("complete", [&] { return completed(b.presentation, bounds, result); });
    auto const cs = time("crossed.extract", [&] { return crossed_system_of(b, rs, bounds); });
    return group_extension_of(cs).extension;
  };
  auto* group = app.add_subcommand("group", "virtually abelian group invariants");
  group->require_subcommand(1, 1);
  auto group_verb = [&](char const* name, char const* desc, auto&& check) {
    auto* sub = group->add_subcommand(name, desc);
    sub->add_option("target", target, "bundle or extension file")->required();
    verb(sub, [&, check](json& timings) {
      StageTimer time(timings);
      Outcome    o;
      auto const e       = extension_at(o.result, time);
      o.result["extension"] = extension_json(e);
      auto const v       = validate_extension(e);
      if (!v.ok) {
        o.status = Status::Refuted;
        return o;
      }
      check(e, o);
      return o;
    });
  };
  group_verb("validate", "check the extension data", [](ExtensionData const&, Outcome&) {});
  group_verb("delta-plus", "is Delta+(G) trivial", [](ExtensionData const& e, Outcome& o) {
    auto const v          = delta_plus_trivial(e);
    o.result["delta_plus_trivial"] = v.holds;
    o.result["verdict"]   = group_verdict_json(e, v);
    o.status              = v.holds ? Status::Verified : Status::Refuted;
  });
  group_verb("dihedral-free", "is G dihedral free", [](ExtensionData const& e, Outcome& o) {
    auto const v        = dihedral_free(e);
    o.result["dihedral_free"] = v.holds;
    o.result["verdict"] = group_verdict_json(e, v);
    o.status            = v.holds ? Status::Verified : Status::Refuted;
  });

  // Crossed systems.
  auto* crossed = app.add_subcommand("crossed", "crossed-system operations");
  crossed->require_subcommand(1, 1);
  auto crossed_verb = [&](char const* name, char const* desc, auto&& run) {
    auto* sub = crossed->add_subcommand(name, desc);
    sub->add_option("bundle", target, "bundle directory")->required();
    verb(sub, [&, run](json& timings) {
      StageTimer time(timings);
      Outcome    o;
      try {
        auto c = crossed_at(target, bounds, o.result, time);
        run(c, o, time);
      } catch (CrossedError const& e) {
        o.result["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
        o.status          = Status::Refuted;
      }
      return o;
    });
  };
  crossed_verb("validate", "extract and check the system",
               [](CrossedContext& c, Outcome& o, StageTimer&) {
                 o.result["crossed"] = crossed_json(c.cs);
                 auto const bad      = check_associativity(c.cs);
                 o.result["associative"] = !bad.has_value();
                 if (bad) {
                   o.result["associativity_failure"] = {c.cs.labels[(*bad)[0]], c.cs.labels[(*bad)[1]],
                                                        c.cs.labels[(*bad)[2]]};
                   o.status = Status::Refuted;
                 }
                 auto const co = group_extension_of(c.cs);
                 o.result["cosets"] = cosets_json(c.cs, co);
               });
  crossed_verb("orbits", "conjugation orbits on minimal primes",
               [](CrossedContext& c, Outcome& o, StageTimer& time) {
                 auto const od = time("orbits", [&] { return prime_action_orbits(c.cs); });
                 o.result      = orbits_json(c.cs, od);
               });
  crossed_verb("minimal-primes", "minimal primes of S and invariance",
               [](CrossedContext& c, Outcome& o, StageTimer& time) {
                 auto const co = group_extension_of(c.cs);
                 auto const od = time("orbits", [&] { return prime_action_orbits(c.cs); });
                 auto const tr = time("transfer", [&] { return transfer_certificates(c.cs, co, od); });
                 auto const sp = time("separation",
                                      [&] { return separation_certificates(c.cs, co, od); });
                 auto const mp = minimal_primes_of_S(od, tr);
                 o.result      = {{"orbits", orbits_json(c.cs, od)},
                                  {"transfer", transfer_json(c.cs, od, tr)},
                                  {"separation", separation_json(sp)},
                                  {"minimal_primes", minimal_json(mp)}};
                 o.status = mp.status;
               });
  crossed_verb("maximality", "bounded maximality search",
               [&](CrossedContext& c, Outcome& o, StageTimer& time) {
                 auto const co    = group_extension_of(c.cs);
                 auto const named = parse_witnesses(c.bundle, c.cs);
                 auto const m     = time("maximality", [&] {
                   return maximality_check(c.cs, co, bounds.radius, bounds.box, named);
                 });
                 o.result = maximality_json(c.cs, m);
                 o.status = m.status == MaximalityStatus::VerifiedUpToBounds ? Status::Verified
                                                                             : Status::Unknown;
               });
  crossed_verb("rep-verify", "check the monomial representation",
               [&](CrossedContext& c, Outcome& o, StageTimer& time) {
                 if (!c.bundle.rep) {
                   throw InputError((c.bundle.dir / "monomial_rep.txt").string(), "missing file");
                 }
                 auto const r = time("rep_verify", [&] {
                   return verify_monomial_rep(c.bundle.presentation, c.rs, *c.bundle.rep,
                                              bounds.scan_len);
                 });
                 o.result = rep_json(c.bundle.presentation, r);
                 o.status = r.ok() ? Status::Verified : Status::Refuted;
               });

  // Reports.
  auto* report = app.add_subcommand("report", "aggregated reports");
  report->require_subcommand(1, 1);
  auto* t33 = report->add_subcommand("theorem33", "maximal order verdict");
  t33->add_option("bundle", target, "bundle directory")->required();
  verb(t33, [&](json& timings) {
    StageTimer time(timings);
    Outcome    o;
    try {
      auto       c     = crossed_at(target, bounds, o.result, time);
      auto const named = parse_witnesses(c.bundle, c.cs);
      auto const r     = time("theorem33", [&] {
        return theorem33_report(c.cs, bounds.radius, bounds.box, named);
      });
      o.result = theorem33_json(c.cs, r);
      o.status = r.overall;
    } catch (CrossedError const& e) {
      o.result["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
      o.status          = Status::Refuted;
    }
    return o;
  });

  auto* replay = app.add_subcommand("replay", "rerun a bundled example against expected.json");
  replay->add_option("name", target, "example name or bundle directory")->required();
  replay->add_flag("--update", update, "write expected.json instead of comparing");
  verb(replay, [&](json& timings) {
    Outcome        o;
    fs::path const dir = resolve_replay(target);
    Bundle const   b   = load_bundle(dir);
    auto           r   = replay_bundle(b, bounds, timings);
    o.result["replay"]  = r.result;
    o.result["outcome"] = to_string(r.status);
    fs::path const expected_path = dir / "expected.json";
    if (update) {
      std::ofstream(expected_path) << r.result.dump(2) << '\n';
      o.result["updated"] = expected_path.string();
      return o;
    }
    if (!fs::exists(expected_path)) throw InputError(expected_path.string(), "missing file");
    json expected;
    try {
      expected = json::parse(read_file(expected_path));
    } catch (json::parse_error const& e) {
      throw InputError(expected_path.string(), e.what());
    }
    json const d        = replay_diff(expected, r.result);
    o.result["matches"] = d.empty();
    o.result["diff"]    = d;
    o.status            = d.empty() ? Status::Verified : Status::Refuted;
    return o;
  });

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  json report_json = {{"tool", "workbench"}, {"version", tool_version}};
  json command     = json::array();
  for (int i = 1; i < argc; ++i) command.push_back(argv[i]);
  report_json["command"] = command;
  json timings           = json::object();
  int  code              = 0;
  try {
    Outcome o                = action(timings);
    report_json["result"]    = o.result;
    report_json["status"]    = to_string(o.status);
    code                     = exit_code(o.status);
  } catch (Status s) {
    report_json["status"] = to_string(s);
    report_json["result"] = json::object();
    code                  = exit_code(s);
  } catch (InputError const& e) {
    report_json["status"] = "InputError";
    report_json["error"]  = {{"file", e.file()}, {"message", e.what()}};
    code                  = 3;
  } catch (ParseError const& e) {
    report_json["status"] = "InputError";
    report_json["error"]  = {{"message", e.what()}, {"line", e.line()}, {"column", e.column()}};
    code                  = 3;
  } catch (std::invalid_argument const& e) {
    report_json["status"] = "InputError";
    report_json["error"]  = {{"message", e.what()}};
    code                  = 3;
  }
  report_json["exit_code"]  = code;
  report_json["timings_ms"] = timings;
  if (report_json.contains("error")) {
    std::cerr << "workbench: " << report_json["error"]["message"].get<std::string>() << '\n';
  }
  if (pretty) {
    render(std::cout, report_json, "");
  } else {
    std::cout << report_json.dump() << '\n';
  }
  return code;
}
