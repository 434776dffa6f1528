#include "treebound/report.hpp"

#include <json.hpp>

#include "treebound/location.hpp"

namespace treebound {

namespace {

using Json = nlohmann::ordered_json;

std::string status_str(const FunctionReport& f) {
  if (f.skipped) return "skipped";
  switch (f.status) {
    case LpStatus::Optimal:
      return "ok";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

}  // namespace

void write_text_report(std::ostream& out, const AnalysisReport& rep, bool with_stats) {
  out << rep.filename << " (" << cost_model_str(rep.cost_model) << " cost model)\n";
  for (const std::string& w : rep.warnings) out << "warning: " << w << "\n";
  for (const FunctionReport& f : rep.functions) {
    out << "\n" << f.name << " : " << f.type_text << "\n";
    for (const std::string& w : f.warnings) out << "  warning: " << w << "\n";
    if (f.skipped) {
      out << "  skipped: " << f.skip_reason << "\n";
      continue;
    }
    if (f.status != LpStatus::Optimal) {
      out << "  no certificate (" << status_str(f) << "): " << f.conflict_text << "\n";
      continue;
    }
    out << "  worldviews: " << f.worldviews << " (" << retention_str(f.retention)
        << " retention)\n";
    out << "  bound:      " << f.bound_text << "\n";
    out << "  returned:   " << f.returned_text << "\n";
    if (f.check.checked > 0 || f.check.guarded > 0) {
      out << "  check:      " << f.check.checked << " ok, " << f.check.guarded << " guarded\n";
    }
    if (with_stats) {
      out << "  constraints: " << f.stats.constraints << " over " << f.stats.variables
          << " coefficients (";
      bool first = true;
      for (const auto& [cat, n] : f.stats.categories) {
        if (!first) out << ", ";
        first = false;
        out << n << " " << category_str(cat);
      }
      out << ")\n";
      out << "  lp:          " << f.stats.solver_rows << " rows, " << f.stats.solver_cols
          << " columns after presolve removed " << f.stats.presolve_eliminated << "; "
          << f.stats.pivots << " pivots\n";
    }
    if (!f.lp_dump.empty()) out << f.lp_dump;
  }
}

std::string json_report(const AnalysisReport& rep, bool with_stats) {
  Json root;
  root["schema"] = "treebound-report/1";
  root["file"] = rep.filename;
  root["cost_model"] = cost_model_str(rep.cost_model);
  root["ok"] = rep.all_ok();
  root["warnings"] = rep.warnings;
  Json fns = Json::array();
  for (const FunctionReport& f : rep.functions) {
    Json j;
    j["name"] = f.name;
    j["type"] = f.type_text;
    j["status"] = status_str(f);
    if (f.skipped) {
      j["skip_reason"] = f.skip_reason;
      fns.push_back(std::move(j));
      continue;
    }
    j["worldviews"] = f.worldviews;
    j["worldviews_required"] = f.worldviews_required;
    j["retention"] = retention_str(f.retention);
    if (f.status == LpStatus::Optimal) {
      Json sig = Json::object();
      for (const auto& [i, v] : f.signature) sig[index_str(i)] = rational_str(v);
      j["signature"] = std::move(sig);
      j["bound"] = f.bound_text;
      j["returned"] = f.returned_text;
      if (f.check.checked > 0 || f.check.guarded > 0) {
        Json c;
        c["runs"] = f.check.checked;
        c["guarded"] = f.check.guarded;
        c["violations"] = f.check.violations;
        j["check"] = std::move(c);
      }
    } else {
      j["conflict"] = f.conflict_text;
    }
    if (with_stats) {
      Json s;
      s["constraints"] = f.stats.constraints;
      s["variables"] = f.stats.variables;
      Json cats = Json::object();
      for (const auto& [cat, n] : f.stats.categories) cats[category_str(cat)] = n;
      s["categories"] = std::move(cats);
      s["solver_rows"] = f.stats.solver_rows;
      s["solver_cols"] = f.stats.solver_cols;
      s["presolve_eliminated"] = f.stats.presolve_eliminated;
      s["pivots"] = f.stats.pivots;
      j["stats"] = std::move(s);
    }
    if (!f.warnings.empty()) j["warnings"] = f.warnings;
    fns.push_back(std::move(j));
  }
  root["functions"] = std::move(fns);
  return root.dump(2) + "\n";
}

}  // namespace treebound
