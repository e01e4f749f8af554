#include "trisym/catalog.hpp"

#include <array>
#include <string>

namespace trisym {
namespace {

using K = OrbitKind;

// Dunavant's symmetric rules. Type-1 entries give the distinct barycentric
// component lambda1 of (lambda1, (1-lambda1)/2, (1-lambda1)/2); type-2 entries
// give (lambda1, lambda2) of (lambda1, lambda2, 1-lambda1-lambda2). Weights
// are per point and sum to one. Degrees 7, 10 and 11 are taken at 15
// digits; refine_rule lifts them to extended precision.

constexpr CatalogOrbit kDegree1[] = {
    {K::Type0, "", "", "1"},
};

constexpr CatalogOrbit kDegree2[] = {
    {K::Type1, "0.6666666666666666666666666666666666666667", "", "0.3333333333333333333333333333333333333333"},
};

constexpr CatalogOrbit kDegree3[] = {
    {K::Type0, "", "", "-0.5625"},
    {K::Type1, "0.6", "", "0.5208333333333333333333333333333333333333"},
};

constexpr CatalogOrbit kDegree4[] = {
    {K::Type1, "0.10810301816807022736334149223390", "", "0.22338158967801146569500700843312"},
    {K::Type1, "0.81684757298045851308085707319560", "", "0.10995174365532186763832632490021"},
};

constexpr CatalogOrbit kDegree5[] = {
    {K::Type0, "", "", "0.225"},
    {K::Type1, "0.05971587178976982045911758097310", "", "0.13239415278850618073764938783315"},
    {K::Type1, "0.79742698535308732239802527616976", "", "0.12593918054482715259568394550018"},
};

constexpr CatalogOrbit kDegree6[] = {
    {K::Type1, "0.50142650965817915741672289378596", "", "0.11678627572637936602528961138558"},
    {K::Type1, "0.87382197101699554331933679425836", "", "0.05084490637020681692093680910686"},
    {K::Type2, "0.31035245103378440541660773395655", "0.63650249912139864723014259441205",
     "0.08285107561837357519355345642044"},
};

constexpr CatalogOrbit kDegree7[] = {
    {K::Type0, "", "", "-0.149570044467670"},
    {K::Type1, "0.479308067841923", "", "0.175615257433204"},
    {K::Type1, "0.869739794195568", "", "0.053347235608839"},
    {K::Type2, "0.312865496004875", "0.638444188569809", "0.077113760890257"},
};

constexpr CatalogOrbit kDegree8[] = {
    {K::Type0, "", "", "0.14431560767778716825109111048906"},
    {K::Type1, "0.65886138449647958675541299701708", "", "0.10321737053471825028179155029212"},
    {K::Type1, "0.89890554336593804908315289880680", "", "0.03245849762319808031092592834178"},
    {K::Type1, "0.08141482341455368794236897101166", "", "0.09509163426728462479389610438858"},
    {K::Type2, "0.26311282963463811342178578628464", "0.72849239295540428124100037917606",
     "0.02723031417443499426484469007390"},
};

constexpr CatalogOrbit kDegree9[] = {
    {K::Type0, "", "", "0.09713579628279609890744676309485"},
    {K::Type1, "0.02063496160252474443258615032762", "", "0.03133470022713983234393199080984"},
    {K::Type1, "0.12582081701412672546013927112930", "", "0.07782754100477543338465495857972"},
    {K::Type1, "0.62359292876193453951807743906534", "", "0.07964773892720910288013526957424"},
    {K::Type1, "0.91054097321109405877951505606440", "", "0.02557767565869810438673914467637"},
    {K::Type2, "0.22196298916076569567510252769319", "0.74119859878449802069007987352342",
     "0.04328353937728937728937728937729"},
};

constexpr CatalogOrbit kDegree10[] = {
    {K::Type0, "", "", "0.090817990382754"},
    {K::Type1, "0.028844733232686", "", "0.036725957756467"},
    {K::Type1, "0.781036849029926", "", "0.045321059435528"},
    {K::Type2, "0.141707219414880", "0.307939838764121", "0.072757916845420"},
    {K::Type2, "0.025003534762686", "0.246672560639903", "0.028327242531057"},
    {K::Type2, "0.009540815400299", "0.066803251012200", "0.009421666963733"},
};

// Has one orbit with a negative barycentric component (points outside).
constexpr CatalogOrbit kDegree11[] = {
    {K::Type1, "-0.069222096541516", "", "0.000927006328961"},
    {K::Type1, "0.202061394068290", "", "0.077149534914813"},
    {K::Type1, "0.593380199137436", "", "0.059322977380774"},
    {K::Type1, "0.761298175434838", "", "0.036184540503418"},
    {K::Type1, "0.935270103777448", "", "0.013659731002678"},
    {K::Type2, "0.050178138310495", "0.356620648261293", "0.052337111962204"},
    {K::Type2, "0.021022016536166", "0.171488980304042", "0.020707659639141"},
};

constexpr std::array<std::span<const CatalogOrbit>, 11> kCatalog = {
    kDegree1, kDegree2, kDegree3, kDegree4, kDegree5, kDegree6,
    kDegree7, kDegree8, kDegree9, kDegree10, kDegree11,
};

}  // namespace

std::span<const CatalogOrbit> catalog_orbits(int degree) {
  if (degree < kMinCatalogDegree || degree > kMaxCatalogDegree) {
    throw Error(ErrorCode::UnsupportedDegree,
                "no built-in rule of degree " + std::to_string(degree) + " (supported: 1..11)");
  }
  return kCatalog[static_cast<std::size_t>(degree - 1)];
}

}  // namespace trisym
