#pragma once

// Minimal static SVG writer for phase portraits: regime-shaded grid cells,
// sampled trajectories, and separatrix overlays. Axes may be linear or log.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rg2cli {

struct SvgAxis {
    double min = 0.0;
    double max = 1.0;
    bool log_scale = false;
    std::string label;
};

class PortraitSvg {
  public:
    PortraitSvg(SvgAxis x, SvgAxis y, int width = 720, int height = 640)
        : x_(x), y_(y), width_(width), height_(height) {}

    void add_cell(double x0, double x1, double y0, double y1, const std::string& fill,
                  bool flagged) {
        std::ostringstream os;
        os << "  <rect x='" << px(x0) << "' y='" << py(y1) << "' width='" << (px(x1) - px(x0))
           << "' height='" << (py(y0) - py(y1)) << "' fill='" << fill << "' fill-opacity='0.55'";
        if (flagged) os << " stroke='#d62728' stroke-width='1.5'";
        os << "/>\n";
        cells_ += os.str();
    }

    void add_polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::string& stroke, double width, double opacity = 1.0) {
        if (xs.size() < 2) return;
        std::ostringstream os;
        os << "  <polyline fill='none' stroke='" << stroke << "' stroke-width='" << width
           << "' stroke-opacity='" << opacity << "' points='";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!in_range(xs[i], ys[i])) continue;
            os << px(xs[i]) << "," << py(ys[i]) << " ";
        }
        os << "'/>\n";
        curves_ += os.str();
    }

    void add_legend_entry(const std::string& color, const std::string& text) {
        legend_.push_back({color, text});
    }

    bool write(const std::string& path) const {
        std::ofstream out(path);
        if (!out.is_open()) return false;
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width_ << "' height='"
            << height_ << "' viewBox='0 0 " << width_ << " " << height_ << "'>\n";
        out << "  <rect x='0' y='0' width='" << width_ << "' height='" << height_
            << "' fill='white'/>\n";
        out << cells_;
        out << curves_;
        // frame + labels
        out << "  <rect x='" << margin_ << "' y='" << margin_ << "' width='" << plot_w()
            << "' height='" << plot_h() << "' fill='none' stroke='black'/>\n";
        out << "  <text x='" << (margin_ + plot_w() / 2) << "' y='" << (height_ - 12)
            << "' text-anchor='middle' font-size='14'>" << x_.label << "</text>\n";
        out << "  <text x='16' y='" << (margin_ + plot_h() / 2)
            << "' text-anchor='middle' font-size='14' transform='rotate(-90 16 "
            << (margin_ + plot_h() / 2) << ")'>" << y_.label << "</text>\n";
        for (int side = 0; side < 2; ++side) {
            const SvgAxis& ax = side == 0 ? x_ : y_;
            for (int i = 0; i <= 4; ++i) {
                const double u = i / 4.0;
                const double v = ax.log_scale
                                     ? ax.min * std::pow(ax.max / ax.min, u)
                                     : ax.min + u * (ax.max - ax.min);
                std::ostringstream val;
                val.precision(3);
                val << v;
                if (side == 0)
                    out << "  <text x='" << px(v) << "' y='" << (margin_ + plot_h() + 18)
                        << "' text-anchor='middle' font-size='11'>" << val.str() << "</text>\n";
                else
                    out << "  <text x='" << (margin_ - 6) << "' y='" << (py(v) + 4)
                        << "' text-anchor='end' font-size='11'>" << val.str() << "</text>\n";
            }
        }
        double ly = margin_ + 14;
        for (const auto& [color, text] : legend_) {
            out << "  <rect x='" << (width_ - 205) << "' y='" << (ly - 10)
                << "' width='12' height='12' fill='" << color << "' fill-opacity='0.8'/>\n";
            out << "  <text x='" << (width_ - 188) << "' y='" << ly << "' font-size='11'>" << text
                << "</text>\n";
            ly += 16;
        }
        out << "</svg>\n";
        return out.good();
    }

  private:
    double plot_w() const { return width_ - 2.0 * margin_ - 150.0; }
    double plot_h() const { return height_ - 2.0 * margin_; }

    double frac(const SvgAxis& ax, double v) const {
        if (ax.log_scale) return std::log(v / ax.min) / std::log(ax.max / ax.min);
        return (v - ax.min) / (ax.max - ax.min);
    }
    double px(double x) const { return margin_ + frac(x_, x) * plot_w(); }
    double py(double y) const { return margin_ + (1.0 - frac(y_, y)) * plot_h(); }
    bool in_range(double x, double y) const {
        return x >= x_.min && x <= x_.max && y >= y_.min && y <= y_.max && x > 0 && y > 0;
    }

    SvgAxis x_, y_;
    int width_, height_;
    double margin_ = 52.0;
    std::string cells_, curves_;
    std::vector<std::pair<std::string, std::string>> legend_;
};

}  // namespace rg2cli
