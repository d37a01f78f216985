#include "cdmetrics/cli.hpp"
#include "cdmetrics/diagram.hpp"
#include "cdmetrics/formats.hpp"
#include "cdmetrics/metrics.hpp"
#include "cdmetrics/parser.hpp"
#include "cdmetrics/quality_model.hpp"
#include "cdmetrics/rank_validation.hpp"

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

namespace py = pybind11;
using namespace cdm;

namespace {

Metric metric_or_throw(const std::string& name) {
    auto m = metric_from_name(name);
    if (!m) {
        throw py::value_error("unknown metric '" + name + "'");
    }
    return *m;
}

py::dict metrics_dict(const MetricsVector& mv) {
    py::dict d;
    for (Metric m : kAllMetrics) {
        d[py::str(std::string(metric_name(m)))] = mv[m];
    }
    return d;
}

PredictorValues predictor_values(const std::map<std::string, double>& values) {
    PredictorValues out;
    for (const auto& [name, v] : values) {
        out[metric_or_throw(name)] = v;
    }
    return out;
}

DifferenceMode mode_from(const std::string& mode) {
    if (mode == "rank") {
        return DifferenceMode::Rank;
    }
    if (mode == "value") {
        return DifferenceMode::Value;
    }
    throw py::value_error("mode must be 'rank' or 'value'");
}

std::vector<RatedPair> to_pairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<RatedPair> out;
    for (auto [known, computed] : pairs) {
        out.push_back({known, computed});
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Class-diagram design metrics, understandability estimation and rank validation";

    // Exception types live for the lifetime of the interpreter.
    static py::handle base = py::exception<Error>(m, "DiagramError").release();
    static py::handle syntax = py::exception<SyntaxError>(m, "DiagramSyntaxError", base).release();
    static py::handle validation = py::exception<ValidationError>(m, "ValidationError", base).release();
    static py::handle model = py::exception<ModelError>(m, "ModelError", base).release();
    static py::handle rank = py::exception<RankError>(m, "RankError", base).release();
    static py::handle format = py::exception<FormatError>(m, "FormatError", base).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const SyntaxError& e) {
            py::object exc = syntax(e.what());
            exc.attr("line") = e.span().line;
            exc.attr("column") = e.span().column;
            PyErr_SetObject(syntax.ptr(), exc.ptr());
        } catch (const ValidationError& e) {
            py::object exc = validation(e.what());
            exc.attr("detail") = e.detail();
            PyErr_SetObject(validation.ptr(), exc.ptr());
        } catch (const ModelError& e) {
            PyErr_SetString(model.ptr(), e.what());
        } catch (const RankError& e) {
            PyErr_SetString(rank.ptr(), e.what());
        } catch (const FormatError& e) {
            PyErr_SetString(format.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), e.what());
        }
    });

    py::enum_<RelationKind>(m, "RelationKind")
        .value("Association", RelationKind::Association)
        .value("Aggregation", RelationKind::Aggregation)
        .value("Dependency", RelationKind::Dependency)
        .value("Generalization", RelationKind::Generalization);

    py::class_<ClassDecl>(m, "ClassDecl")
        .def(py::init<std::string, std::vector<std::string>, std::vector<std::string>>(), py::arg("name"),
             py::arg("attributes") = std::vector<std::string>{}, py::arg("methods") = std::vector<std::string>{})
        .def_readwrite("name", &ClassDecl::name)
        .def_readwrite("attributes", &ClassDecl::attributes)
        .def_readwrite("methods", &ClassDecl::methods)
        .def(py::self == py::self);

    py::class_<Relationship>(m, "Relationship")
        .def(py::init<RelationKind, std::string, std::string>(), py::arg("kind"), py::arg("source"),
             py::arg("target"))
        .def_readwrite("kind", &Relationship::kind)
        .def_readwrite("source", &Relationship::from)
        .def_readwrite("target", &Relationship::to)
        .def(py::self == py::self);

    py::class_<ClassDiagram>(m, "ClassDiagram")
        .def(py::init<>())
        .def_readwrite("id", &ClassDiagram::id)
        .def_readwrite("classes", &ClassDiagram::classes)
        .def_readwrite("relationships", &ClassDiagram::relationships)
        .def(py::self == py::self);

    py::class_<ValidatedDiagram>(m, "ValidatedDiagram")
        .def_property_readonly("diagram", &ValidatedDiagram::diagram);

    m.def("parse", &parse, py::arg("source"));
    m.def("serialize", &serialize, py::arg("diagram"));
    m.def("parse_json", &parse_json, py::arg("text"));
    m.def("to_json", &to_json, py::arg("diagram"));
    m.def("validate", &validate, py::arg("diagram"));

    m.def("metric_names", [] {
        std::vector<std::string> names;
        for (Metric metric : kAllMetrics) {
            names.emplace_back(metric_name(metric));
        }
        return names;
    });
    m.def("compute_metrics", [](const ValidatedDiagram& d) { return metrics_dict(compute_metrics(d)); },
          py::arg("diagram"));
    m.def("dit", &dit, py::arg("diagram"), py::arg("class_name"));
    m.def("hagg", &hagg, py::arg("diagram"), py::arg("class_name"));
    m.def(
        "count_hierarchies",
        [](const ValidatedDiagram& d, const std::string& kind) {
            if (kind == "generalization") {
                return count_hierarchies(d, HierarchyKind::Generalization);
            }
            if (kind == "aggregation") {
                return count_hierarchies(d, HierarchyKind::Aggregation);
            }
            throw py::value_error("kind must be 'generalization' or 'aggregation'");
        },
        py::arg("diagram"), py::arg("kind"));

    py::class_<LinearModel>(m, "LinearModel")
        .def(py::init([](double intercept, const std::vector<std::pair<std::string, double>>& coefficients) {
                 std::vector<Coefficient> cs;
                 for (const auto& [name, w] : coefficients) {
                     cs.push_back({metric_or_throw(name), w});
                 }
                 return LinearModel(intercept, std::move(cs));
             }),
             py::arg("intercept"), py::arg("coefficients"))
        .def_property_readonly("intercept", &LinearModel::intercept)
        .def_property_readonly("coefficients",
                               [](const LinearModel& lm) {
                                   std::vector<std::pair<std::string, double>> out;
                                   for (const auto& c : lm.coefficients()) {
                                       out.emplace_back(metric_name(c.metric), c.weight);
                                   }
                                   return out;
                               })
        .def(
            "estimate",
            [](const LinearModel& lm, const std::map<std::string, double>& values) {
                return lm.estimate(predictor_values(values));
            },
            py::arg("values"))
        .def("to_json", &model_to_json)
        .def_static("from_json", &parse_model, py::arg("text"));

    m.def("published_model", &published_understandability_model, py::return_value_policy::copy);

    m.def(
        "fit",
        [](const std::vector<std::pair<std::map<std::string, double>, double>>& samples,
           const std::vector<std::string>& predictors) {
            std::vector<RatedSample> rated;
            for (const auto& [values, rating] : samples) {
                rated.push_back({predictor_values(values), rating});
            }
            std::vector<Metric> ps;
            for (const auto& name : predictors) {
                ps.push_back(metric_or_throw(name));
            }
            return fit(rated, ps);
        },
        py::arg("samples"), py::arg("predictors"));

    m.def(
        "ranks_with_ties", [](const std::vector<double>& v) { return ranks_with_ties(v); }, py::arg("values"));
    m.def(
        "spearman",
        [](const std::vector<std::pair<double, double>>& pairs, const std::string& mode, double alpha) {
            const auto r = spearman(to_pairs(pairs), mode_from(mode), alpha);
            py::dict d;
            d["n"] = r.n;
            d["mode"] = std::string(to_string(r.mode));
            d["d"] = r.d;
            d["sum_d_squared"] = r.sum_d_squared;
            d["r_s"] = r.r_s;
            d["alpha"] = r.alpha;
            d["critical_value"] = std::isnan(r.critical_value) ? py::object(py::none()) : py::float_(r.critical_value);
            d["significant"] = r.significant;
            return d;
        },
        py::arg("pairs"), py::arg("mode") = "rank", py::arg("alpha") = 0.05);
    m.def(
        "significance",
        [](double r_s, std::size_t n, double alpha) {
            const auto s = significance(r_s, n, alpha);
            return std::make_pair(s.critical_value, s.significant);
        },
        py::arg("r_s"), py::arg("n"), py::arg("alpha") = 0.05);
    m.def("table2_pairs", [] {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : table2_pairs()) {
            out.emplace_back(p.known, p.computed);
        }
        return out;
    });

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "cdmetrics");
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command line in-process; returns (exit_code, stdout, stderr).");
}
