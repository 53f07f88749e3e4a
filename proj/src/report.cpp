#include "fuzzysched/report.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

namespace fsched {

json metrics_to_json(const Instance& instance, const Schedule& schedule) {
  const Defuzzification method = instance.config().defuzzification;
  const double makespan = schedule.makespan();

  json lateness = json::object();
  double max_lateness = 0.0;
  bool any_job = false;
  for (const Job& job : instance.jobs()) {
    double finish = 0.0;
    bool complete = !job.activity_ids.empty();
    for (const std::string& id : job.activity_ids) {
      const Allocation* a = schedule.find(id);
      if (!a) {
        complete = false;
        break;
      }
      finish = std::max(finish, a->crisp_finish);
    }
    if (!complete) continue;
    const double late = finish - defuzz(job.due_date, method);
    lateness[job.id] = late;
    max_lateness = any_job ? std::max(max_lateness, late) : late;
    any_job = true;
  }

  json utilization = json::object();
  for (const Resource& r : instance.resources()) {
    double busy = 0.0;
    for (const Allocation& a : schedule.allocations()) {
      if (a.resource_id == r.id) busy += a.crisp_finish - a.crisp_start;
    }
    utilization[r.id] = makespan > 0.0 ? busy / makespan : 0.0;
  }

  json fixpoints = json::array();
  json converged = json::array();
  bool all_converged = true;
  for (const IterationRecord& rec : schedule.iteration_log()) {
    fixpoints.push_back(rec.fixpoint_iterations);
    converged.push_back(rec.converged);
    all_converged = all_converged && rec.converged;
  }

  return {{"makespan", makespan},
          {"max_lateness", max_lateness},
          {"lateness", lateness},
          {"utilization", utilization},
          {"outer_iterations", schedule.iteration_log().size()},
          {"fixpoint_iterations", fixpoints},
          {"converged", converged},
          {"all_converged", all_converged},
          {"allocated", schedule.allocations().size()},
          {"activities", instance.activities().size()}};
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string gantt_svg(const Instance& instance, const Schedule& schedule) {
  constexpr double kLabel = 80.0;
  constexpr double kRow = 36.0;
  constexpr double kBar = 20.0;
  constexpr double kPlot = 800.0;
  constexpr double kTop = 24.0;

  double horizon = 1.0;
  for (const Allocation& a : schedule.allocations()) horizon = std::max(horizon, a.fuzzy_finish.b);
  const double scale = kPlot / horizon;
  const auto x = [&](double t) { return kLabel + t * scale; };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  const double height = kTop + kRow * static_cast<double>(instance.resources().size()) + 24.0;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLabel + kPlot + 20.0 << "\" height=\""
     << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  static const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                   "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  std::map<std::string, std::size_t> job_colour;
  for (const Job& j : instance.jobs()) job_colour.emplace(j.id, job_colour.size());

  for (std::size_t r = 0; r < instance.resources().size(); ++r) {
    const Resource& res = instance.resources()[r];
    const double y = kTop + kRow * static_cast<double>(r);
    os << "  <text x=\"4\" y=\"" << y + kBar * 0.7 << "\">" << escape_xml(res.id) << "</text>\n";
    os << "  <line x1=\"" << kLabel << "\" y1=\"" << y + kBar + 6 << "\" x2=\"" << kLabel + kPlot << "\" y2=\""
       << y + kBar + 6 << "\" stroke=\"#ddd\"/>\n";
    for (const Allocation& a : schedule.allocations()) {
      if (a.resource_id != res.id) continue;
      const Activity* act = instance.find_activity(a.activity_id);
      const std::size_t colour = act && job_colour.count(act->job_id) ? job_colour[act->job_id] : 0;
      os << "  <g>\n    <title>" << escape_xml(a.activity_id) << " [" << a.crisp_start << ", " << a.crisp_finish
         << ")</title>\n";
      os << "    <rect x=\"" << x(a.crisp_start) << "\" y=\"" << y << "\" width=\""
         << std::max(0.5, (a.crisp_finish - a.crisp_start) * scale) << "\" height=\"" << kBar << "\" fill=\""
         << kPalette[colour % 10] << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
      // Whiskers: support of the fuzzy start (top edge) and finish (bottom edge).
      os << "    <line x1=\"" << x(a.fuzzy_start.a) << "\" y1=\"" << y << "\" x2=\"" << x(a.fuzzy_start.b)
         << "\" y2=\"" << y << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
      os << "    <line x1=\"" << x(a.fuzzy_finish.a) << "\" y1=\"" << y + kBar << "\" x2=\"" << x(a.fuzzy_finish.b)
         << "\" y2=\"" << y + kBar << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
      os << "    <text x=\"" << x(a.crisp_start) + 2 << "\" y=\"" << y + kBar * 0.7 << "\" fill=\"white\">"
         << escape_xml(a.activity_id) << "</text>\n  </g>\n";
    }
  }
  const double axis_y = kTop + kRow * static_cast<double>(instance.resources().size()) + 12.0;
  os << "  <text x=\"" << kLabel << "\" y=\"" << axis_y << "\">0</text>\n";
  os << "  <text x=\"" << kLabel + kPlot - 30 << "\" y=\"" << axis_y << "\">" << horizon << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string gantt_text(const Instance& instance, const Schedule& schedule, int width) {
  double horizon = 1.0;
  for (const Allocation& a : schedule.allocations()) horizon = std::max(horizon, a.crisp_finish);
  const double scale = static_cast<double>(width) / horizon;

  std::size_t label = 4;
  for (const Resource& r : instance.resources()) label = std::max(label, r.id.size());

  std::ostringstream os;
  for (const Resource& r : instance.resources()) {
    std::string row(static_cast<std::size_t>(width), '.');
    for (const Allocation& a : schedule.allocations()) {
      if (a.resource_id != r.id) continue;
      const auto from = static_cast<std::size_t>(std::clamp(a.crisp_start * scale, 0.0, double(width)));
      auto to = static_cast<std::size_t>(std::clamp(a.crisp_finish * scale, 0.0, double(width)));
      if (to <= from && from < row.size()) to = from + 1;
      const Activity* act = instance.find_activity(a.activity_id);
      const char mark = act && !act->job_id.empty() ? act->job_id.back() : '#';
      for (std::size_t c = from; c < to && c < row.size(); ++c) row[c] = mark;
    }
    os << std::left << std::setw(static_cast<int>(label)) << r.id << " |" << row << "|\n";
  }
  os << std::string(label, ' ') << "  0" << std::string(static_cast<std::size_t>(std::max(1, width - 8)), ' ')
     << std::fixed << std::setprecision(1) << horizon << '\n';
  for (const Allocation& a : schedule.allocations()) {
    os << "  " << a.activity_id << " on " << a.resource_id << ": [" << std::setprecision(3) << a.crisp_start
       << ", " << a.crisp_finish << ")\n";
  }
  return os.str();
}

}  // namespace fsched
