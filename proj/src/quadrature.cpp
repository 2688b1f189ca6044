#include "mixeig/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace mixeig {

namespace {

// Symmetry orbit of a Dunavant rule: centroid, (a,a,1-2a) or (a,b,1-a-b).
struct Orbit {
  int size;
  double a;
  double b;
  double w;  // weight normalized to unit total
};

// D. A. Dunavant, Int. J. Numer. Meth. Eng. 21 (1985). Degree 11 is omitted
// (it has points outside the triangle); requests for it use the degree 12 rule.
const std::vector<Orbit>& dunavant_table(int degree) {
  static const std::array<std::vector<Orbit>, 13> tables = {{
      {},
      {{1, 0, 0, 1.0}},
      {{3, 1.0 / 6.0, 0, 1.0 / 3.0}},
      {{1, 0, 0, -27.0 / 48.0}, {3, 0.2, 0, 25.0 / 48.0}},
      {{3, 0.44594849091596488631832925388305, 0, 0.22338158967801146569500700843312},
       {3, 0.09157621350977074345957146340220, 0, 0.10995174365532186763832632490021}},
      {{1, 0, 0, 0.225},
       {3, 0.47014206410511508977044120951345, 0, 0.13239415278850618073764938783315},
       {3, 0.10128650732345633880098736191512, 0, 0.12593918054482715259568394550018}},
      {{3, 0.24928674517091042129163855310702, 0, 0.11678627572637936602528961138558},
       {3, 0.06308901449150222834033160287082, 0, 0.05084490637020681692093680910686},
       {6, 0.31035245103378440541660773395655, 0.63650249912139864723014259441205,
        0.08285107561837357519355345642044}},
      {{1, 0, 0, -0.14957004446767497031448264617551},
       {3, 0.26034596607904134570479766426679, 0, 0.17561525743321691348266882420661},
       {3, 0.06513010290221623036887891059948, 0, 0.05334723560883960230296261044945},
       {6, 0.31286549600487084236305913996091, 0.63844418856981280478426570854075,
        0.07711376089026831199824523496780}},
      {{1, 0, 0, 0.14431560767778716825109111048906},
       {3, 0.17056930775176020662229350149146, 0, 0.10321737053471825028179155029212},
       {3, 0.05054722831703097545842355059660, 0, 0.03245849762319808031092592834178},
       {3, 0.45929258829272315602881551449417, 0, 0.09509163426728462479389610438858},
       {6, 0.26311282963463811342178578628464, 0.72849239295540428124100037917606,
        0.02723031417443499426484469007390}},
      {{1, 0, 0, 0.09713579628279609890744676309485},
       {3, 0.48968251919873762778370692483619, 0, 0.03133470022713983234393199080984},
       {3, 0.43708959149293663726993036443535, 0, 0.07782754100477543338465495857972},
       {3, 0.18820353561903273024096128046733, 0, 0.07964773892720910288013526957424},
       {3, 0.04472951339445297061024247196780, 0, 0.02557767565869810438673914467637},
       {6, 0.22196298916076569567510252769319, 0.74119859878449802069007987352342,
        0.04328353937728937728937728937729}},
      {{1, 0, 0, 0.090817990382754},
       {3, 0.485577633383657, 0, 0.036725957756467},
       {3, 0.109481575485037, 0, 0.045321059435528},
       {6, 0.141707219414880, 0.307939838764121, 0.072757916845420},
       {6, 0.025003534762686, 0.246672560639903, 0.028327242531057},
       {6, 0.009540815400299, 0.066803251012200, 0.009421666963733}},
      {},
      {{3, 0.488217389773805, 0, 0.025731066440455},
       {3, 0.439724392294460, 0, 0.043692544538038},
       {3, 0.271210385012116, 0, 0.062858224217885},
       {3, 0.127576145541586, 0, 0.034796112930709},
       {3, 0.021317350453210, 0, 0.006166261051559},
       {6, 0.115343494534698, 0.275713269685514, 0.040371557766381},
       {6, 0.022838332222257, 0.281325580989940, 0.022356773202303},
       {6, 0.025734050548330, 0.116251915907597, 0.017316231108659}},
  }};
  return tables[degree];
}

QuadratureRule expand(const std::vector<Orbit>& orbits, int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  auto add = [&rule](double l1, double l2, double w) {
    rule.points.emplace_back(l1, l2);
    rule.weights.push_back(0.5 * w);
  };
  for (const auto& o : orbits) {
    if (o.size == 1) {
      add(1.0 / 3.0, 1.0 / 3.0, o.w);
    } else if (o.size == 3) {
      const double c = 1.0 - 2.0 * o.a;
      add(o.a, o.a, o.w);
      add(o.a, c, o.w);
      add(c, o.a, o.w);
    } else {
      const double c = 1.0 - o.a - o.b;
      const std::array<double, 3> l{o.a, o.b, c};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i != j) add(l[i], l[j], o.w);
        }
      }
    }
  }
  return rule;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Moment residuals sum_q w_q x^i y^j - i! j! / (i+j+2)! for i+j <= degree.
Eigen::VectorXd moment_residual(const std::vector<Orbit>& orbits, int degree) {
  const QuadratureRule rule = expand(orbits, degree);
  Eigen::VectorXd r((degree + 1) * (degree + 2) / 2);
  int row = 0;
  for (int s = 0; s <= degree; ++s) {
    for (int j = 0; j <= s; ++j) {
      const int i = s - j;
      double sum = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        sum += rule.weights[q] * std::pow(rule.points[q].x(), i) * std::pow(rule.points[q].y(), j);
      }
      r(row++) = sum - factorial(i) * factorial(j) / factorial(i + j + 2);
    }
  }
  return r;
}

Eigen::VectorXd pack(const std::vector<Orbit>& orbits) {
  std::vector<double> p;
  for (const auto& o : orbits) {
    if (o.size >= 3) p.push_back(o.a);
    if (o.size == 6) p.push_back(o.b);
    p.push_back(o.w);
  }
  return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

std::vector<Orbit> unpack(std::vector<Orbit> orbits, const Eigen::VectorXd& p) {
  Eigen::Index i = 0;
  for (auto& o : orbits) {
    if (o.size >= 3) o.a = p(i++);
    if (o.size == 6) o.b = p(i++);
    o.w = p(i++);
  }
  return orbits;
}

// Gauss-Newton refinement of the orbit parameters against the moment equations.
// Tables with 15 significant digits are brought to double precision this way.
std::vector<Orbit> polish(std::vector<Orbit> orbits, int degree) {
  Eigen::VectorXd params = pack(orbits);
  Eigen::VectorXd r = moment_residual(orbits, degree);
  for (int iter = 0; iter < 6 && r.lpNorm<Eigen::Infinity>() > 1e-18; ++iter) {
    Eigen::MatrixXd jac(r.size(), params.size());
    for (Eigen::Index p = 0; p < params.size(); ++p) {
      const double step = 1e-6 * std::max(1.0, std::abs(params(p)));
      Eigen::VectorXd plus = params, minus = params;
      plus(p) += step;
      minus(p) -= step;
      jac.col(p) = (moment_residual(unpack(orbits, plus), degree) -
                    moment_residual(unpack(orbits, minus), degree)) /
                   (2.0 * step);
    }
    const Eigen::VectorXd trial = params + jac.completeOrthogonalDecomposition().solve(-r);
    const Eigen::VectorXd rt = moment_residual(unpack(orbits, trial), degree);
    if (rt.lpNorm<Eigen::Infinity>() >= r.lpNorm<Eigen::Infinity>()) break;
    params = trial;
    r = rt;
  }
  return unpack(orbits, params);
}

}  // namespace

const QuadratureRule& triangle_quadrature(int degree) {
  if (degree < 1 || degree > 12) throw std::out_of_range("triangle_quadrature: degree must be in [1, 12]");
  static std::array<QuadratureRule, 13> cache;
  static std::array<std::once_flag, 13> once;
  const int d = degree == 11 ? 12 : degree;
  std::call_once(once[d], [d] { cache[d] = expand(polish(dunavant_table(d), d), d); });
  return cache[d];
}

LineRule gauss_legendre(int npoints) {
  if (npoints < 1) throw std::out_of_range("gauss_legendre: need at least one point");
  LineRule rule;
  rule.points.resize(npoints);
  rule.weights.resize(npoints);
  const int n = npoints;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.points[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace mixeig
