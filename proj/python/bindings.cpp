#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "grig/graph.hpp"
#include "grig/imaging.hpp"
#include "grig/ops.hpp"
#include "grig/oracle.hpp"
#include "grig/serialize.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

grig::GrayImage to_image(const U8Array& pixels) {
  if (pixels.ndim() != 2) throw py::value_error("image must be a 2D uint8 array (height, width)");
  const auto h = static_cast<int>(pixels.shape(0));
  const auto w = static_cast<int>(pixels.shape(1));
  std::vector<std::uint8_t> values(pixels.data(), pixels.data() + pixels.size());
  return grig::GrayImage(w, h, std::move(values));
}

template <typename T>
py::array_t<T> to_array(const grig::Plane<T>& plane) {
  py::array_t<T> out({plane.height(), plane.width()});
  std::copy(plane.values().begin(), plane.values().end(), out.mutable_data());
  return out;
}

py::array_t<double> features_array(const grig::ImageGraph& g) {
  const auto rows = g.features ? *g.features : grig::compute_features(g);
  py::array_t<double> out({static_cast<py::ssize_t>(rows.size()),
                           static_cast<py::ssize_t>(grig::kFeatureDim)});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < grig::kFeatureDim; ++c) {
      view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(c)) = rows[i][c];
    }
  }
  return out;
}

py::array_t<std::uint32_t> edges_array(const std::vector<grig::Edge>& edges) {
  py::array_t<std::uint32_t> out({static_cast<py::ssize_t>(edges.size()), py::ssize_t{2}});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    view(static_cast<py::ssize_t>(k), 0) = edges[k].first;
    view(static_cast<py::ssize_t>(k), 1) = edges[k].second;
  }
  return out;
}

py::dict labeled_graph_dict(const grig::LabeledGraph& g, std::uint16_t feature_dim) {
  py::array_t<float> feats({static_cast<py::ssize_t>(g.node_count),
                            static_cast<py::ssize_t>(feature_dim)});
  std::copy(g.features.begin(), g.features.end(), feats.mutable_data());
  py::dict d;
  d["label"] = g.label;
  d["features"] = feats;
  d["edges"] = edges_array(g.edges);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Granular-rectangle image graphs: partition, graph building, transforms, GRIG I/O.";

  auto error = py::register_exception<grig::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<grig::InvalidArgumentError>(m, "InvalidArgumentError", error.ptr());
  py::register_exception<grig::IoError>(m, "IoError", error.ptr());
  auto format_error = py::register_exception<grig::FormatError>(m, "FormatError", error.ptr());
  py::register_exception<grig::BadMagicError>(m, "BadMagicError", format_error.ptr());
  py::register_exception<grig::TruncatedError>(m, "TruncatedError", format_error.ptr());
  py::register_exception<grig::CountMismatchError>(m, "CountMismatchError", format_error.ptr());
  py::register_exception<grig::UnsupportedVersionError>(m, "UnsupportedVersionError",
                                                        format_error.ptr());
  py::register_exception<grig::ChecksumError>(m, "ChecksumError", format_error.ptr());
  py::register_exception<grig::InvariantError>(m, "InvariantError", format_error.ptr());

  py::enum_<grig::ThresholdSchedule>(m, "ThresholdSchedule")
      .value("PER_REGION", grig::ThresholdSchedule::kPerRegion)
      .value("GLOBAL", grig::ThresholdSchedule::kGlobal);

  py::class_<grig::SearchParams>(m, "SearchParams")
      .def(py::init([](double p_thr, double thr1, double var_thr, double growth, double sigma,
                       grig::ThresholdSchedule schedule) {
             grig::SearchParams p;
             p.p_thr = p_thr;
             p.thr1 = thr1;
             p.var_thr = var_thr;
             p.growth = growth;
             p.sigma = sigma;
             p.schedule = schedule;
             p.validate();
             return p;
           }),
           py::arg("p_thr") = 0.85, py::arg("thr1") = 10.0, py::arg("var_thr") = 400.0,
           py::arg("growth") = 1.005, py::arg("sigma") = 1.0,
           py::arg("schedule") = grig::ThresholdSchedule::kPerRegion)
      .def_readwrite("p_thr", &grig::SearchParams::p_thr)
      .def_readwrite("thr1", &grig::SearchParams::thr1)
      .def_readwrite("var_thr", &grig::SearchParams::var_thr)
      .def_readwrite("growth", &grig::SearchParams::growth)
      .def_readwrite("sigma", &grig::SearchParams::sigma)
      .def_readwrite("schedule", &grig::SearchParams::schedule)
      .def("validate", &grig::SearchParams::validate);

  py::class_<grig::GranularRect>(m, "GranularRect")
      .def(py::init<>())
      .def_readwrite("id", &grig::GranularRect::id)
      .def_readwrite("cx", &grig::GranularRect::cx)
      .def_readwrite("cy", &grig::GranularRect::cy)
      .def_readwrite("rx", &grig::GranularRect::rx)
      .def_readwrite("ry", &grig::GranularRect::ry)
      .def_readwrite("purity", &grig::GranularRect::purity)
      .def_readwrite("variance", &grig::GranularRect::variance)
      .def_readwrite("v_mean", &grig::GranularRect::v_mean)
      .def_readwrite("v_max", &grig::GranularRect::v_max)
      .def_readwrite("v_min", &grig::GranularRect::v_min)
      .def_property_readonly("area", &grig::GranularRect::area)
      .def("__eq__", [](const grig::GranularRect& a, const grig::GranularRect& b) { return a == b; })
      .def("__repr__", [](const grig::GranularRect& r) {
        return "GranularRect(id=" + std::to_string(r.id) + ", c=(" + std::to_string(r.cx) + "," +
               std::to_string(r.cy) + "), r=(" + std::to_string(r.rx) + "," +
               std::to_string(r.ry) + "))";
      });

  py::class_<grig::ImageGraph>(m, "ImageGraph")
      .def_readonly("width", &grig::ImageGraph::width)
      .def_readonly("height", &grig::ImageGraph::height)
      .def_readonly("nodes", &grig::ImageGraph::nodes)
      .def_readonly("edges", &grig::ImageGraph::edges)
      .def_property_readonly("node_count", &grig::ImageGraph::node_count)
      .def("features", &features_array, "(n, 10) node feature matrix")
      .def("edge_array", [](const grig::ImageGraph& g) { return edges_array(g.edges); })
      .def("to_json", &grig::graph_to_json)
      .def_static("from_json", [](const std::string& text) { return grig::graph_from_json(text); })
      .def("__eq__", [](const grig::ImageGraph& a, const grig::ImageGraph& b) { return a == b; });

  m.def("gaussian_smooth", [](const U8Array& img, double sigma) {
    return to_array(grig::gaussian_smooth(to_image(img), sigma));
  }, py::arg("image"), py::arg("sigma") = 1.0);
  m.def("gradient_magnitude", [](const U8Array& img, double sigma) {
    return to_array(grig::gradient_magnitude(grig::gaussian_smooth(to_image(img), sigma)));
  }, py::arg("image"), py::arg("sigma") = 1.0, "Sobel magnitude of the smoothed image");
  m.def("region_purity", [](const U8Array& img, int cx, int cy, int rx, int ry, double thr1) {
    return grig::region_purity(to_image(img), cx, cy, rx, ry, thr1);
  });
  m.def("partition", [](const U8Array& img, const grig::SearchParams& params) {
    return grig::partition(to_image(img), params);
  }, py::arg("image"), py::arg("params") = grig::SearchParams{});
  m.def("build_graph", [](const U8Array& img, const grig::SearchParams& params) {
    return grig::build_graph(to_image(img), params);
  }, py::arg("image"), py::arg("params") = grig::SearchParams{});
  m.def("rect_overlap", &grig::rect_overlap);
  m.def("build_edges", [](const std::vector<grig::GranularRect>& rects) {
    return grig::build_edges(rects);
  });
  m.def("verify_partition", [](const U8Array& img, const grig::SearchParams& params,
                               const std::vector<grig::GranularRect>& rects) {
    const auto report = grig::oracle::verify_partition(to_image(img), params, rects);
    py::list out;
    for (const auto& v : report.violations) {
      out.append(py::make_tuple(grig::oracle::to_string(v.kind), v.rect_id, v.detail));
    }
    return out;
  }, "list of (kind, rect_id, detail); empty when the partition checks out");

  m.def("rotate", [](const grig::ImageGraph& g, double degrees, py::object center) {
    if (center.is_none()) return grig::ops::rotate(g, degrees);
    const auto xy = center.cast<std::pair<double, double>>();
    return grig::ops::rotate(g, degrees, {xy.first, xy.second});
  }, py::arg("graph"), py::arg("degrees"), py::arg("center") = py::none());
  m.def("flip_vertical", [](const grig::ImageGraph& g) { return grig::ops::flip_vertical(g); });
  m.def("flip_horizontal",
        [](const grig::ImageGraph& g) { return grig::ops::flip_horizontal(g); });
  m.def("downsample", &grig::ops::downsample, py::arg("graph"), py::arg("k"));
  m.def("upsample", &grig::ops::upsample, py::arg("graph"), py::arg("k"), py::arg("seed") = 0);
  m.def("extract_subgraph", [](const grig::ImageGraph& g, int x0, int y0, int x1, int y1) {
    return grig::ops::extract_subgraph(g, {x0, y0, x1, y1});
  }, py::arg("graph"), py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"));

  m.def("write_grig", [](const std::filesystem::path& path, const py::list& graphs,
                         std::uint16_t class_count) {
    grig::GraphDataset ds;
    ds.class_count = class_count;
    for (const auto& item : graphs) {
      const auto pair = item.cast<std::pair<grig::ImageGraph, std::uint16_t>>();
      ds.graphs.push_back(grig::to_labeled_graph(pair.first, pair.second));
    }
    grig::write_file(path, grig::write_dataset(ds));
  }, py::arg("path"), py::arg("graphs"), py::arg("class_count"),
     "write [(ImageGraph, label), ...] as a GRIG file");
  m.def("read_grig", [](const std::filesystem::path& path) {
    const auto ds = grig::read_dataset(grig::read_file(path));
    py::list graphs;
    for (const auto& g : ds.graphs) graphs.append(labeled_graph_dict(g, ds.feature_dim));
    py::dict out;
    out["feature_dim"] = ds.feature_dim;
    out["class_count"] = ds.class_count;
    out["graphs"] = graphs;
    return out;
  });

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
