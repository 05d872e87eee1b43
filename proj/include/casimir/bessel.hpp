#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

// Bessel functions J0 and J1 of a real argument, ported from the SLATEC
// FNLIB routines DBESJ0/DBESJ1 (W. Fullerton, LANL): Chebyshev series on
// [0,4] and the amplitude/phase asymptotic form beyond.  Absolute accuracy
// is a few ulps, far inside the 1e-10 the integrators rely on.
//
// j1_zero() returns the positive zeros of J1 used to partition oscillatory
// integrals into lobes: McMahon's expansion refined by one Newton step.

namespace casimir::bessel {

namespace detail {

/// Evaluate an n-term Chebyshev series by the Clenshaw recurrence.
inline double csevl(double x, const double* cs, int n)
{
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    const double twox = 2.0 * x;
    for (int i = n - 1; i >= 0; --i) {
        b2 = b1;
        b1 = b0;
        b0 = twox * b1 - b2 + cs[i];
    }
    return 0.5 * (b0 - b2);
}

inline constexpr double bj0cs[19] = {
    0.10025416196893913701073127264074,
    -0.66522300776440513177678757831124,
    0.2489837034982813137046046872668,
    -0.033252723170035769653884341503854,
    0.0023114179304694015462904924117729,
    -9.9112774199508092339048519336549e-5,
    2.8916708643998808884733903747078e-6,
    -6.1210858663032635057818407481516e-8,
    9.8386507938567841324768748636415e-10,
    -1.2423551597301765145515897006836e-11,
    1.2654336302559045797915827210363e-13,
    -1.0619456495287244546914817512959e-15,
    7.4706210758024567437098915584e-18,
    -4.4697032274412780547627007999999e-20,
    2.3024281584337436200523093333333e-22,
    -1.0319144794166698148522666666666e-24,
    4.06081782748733227008e-27,
    -1.4143836005240913919999999999999e-29,
    4.391090549669888e-32,
};

inline constexpr double bm0cs[37] = {
    0.09211656246827742712573767730182,
    -0.001050590997271905102480716371755,
    1.470159840768759754056392850952e-5,
    -5.058557606038554223347929327702e-7,
    2.787254538632444176630356137881e-8,
    -2.062363611780914802618841018973e-9,
    1.870214313138879675138172596261e-10,
    -1.969330971135636200241730777825e-11,
    2.325973793999275444012508818052e-12,
    -3.009520344938250272851224734482e-13,
    4.194521333850669181471206768646e-14,
    -6.219449312188445825973267429564e-15,
    9.718260411336068469601765885269e-16,
    -1.588478585701075207366635966937e-16,
    2.700072193671308890086217324458e-17,
    -4.750092365234008992477504786773e-18,
    8.61512816260437087319170374656e-19,
    -1.605608686956144815745602703359e-19,
    3.066513987314482975188539801599e-20,
    -5.987764223193956430696505617066e-21,
    1.192971253748248306489069841066e-21,
    -2.420969142044805489484682581333e-22,
    4.996751760510616453371002879999e-23,
    -1.047493639351158510095040511999e-23,
    2.227786843797468101048183466666e-24,
    -4.801813239398162862370542933333e-25,
    1.047962723470959956476996266666e-25,
    -2.3138581656786153251012608e-26,
    5.164823088462674211635199999999e-27,
    -1.164691191850065389525401599999e-27,
    2.651788486043319282958336e-28,
    -6.092559503825728497691306666666e-29,
    1.411804686144259308038826666666e-29,
    -3.298094961231737245750613333333e-30,
    7.763931143074065031714133333333e-31,
    -1.841031343661458478421333333333e-31,
    4.395880138594310737100799999999e-32,
};

inline constexpr double bt02cs[39] = {
    -0.24548295213424597462050467249324,
    0.0012544121039084615780785331778299,
    -3.1253950414871522854973446709571e-5,
    1.4709778249940831164453426969314e-6,
    -9.9543488937950033643468850351158e-8,
    8.5493166733203041247578711397751e-9,
    -8.6989759526554334557985512179192e-10,
    1.0052099533559791084540101082153e-10,
    -1.2828230601708892903483623685544e-11,
    1.7731700781805131705655750451023e-12,
    -2.6174574569485577488636284180925e-13,
    4.0828351389972059621966481221103e-14,
    -6.6751668239742720054606749554261e-15,
    1.1365761393071629448392469549951e-15,
    -2.0051189620647160250559266412117e-16,
    3.6497978794766269635720591464106e-17,
    -6.83096375645823031693558437888e-18,
    1.3107583145670756620057104267946e-18,
    -2.5723363101850607778757130649599e-19,
    5.1521657441863959925267780949333e-20,
    -1.0513017563758802637940741461333e-20,
    2.1820381991194813847301084501333e-21,
    -4.6004701210362160577225905493333e-22,
    9.8407006925466818520953651199999e-23,
    -2.1334038035728375844735986346666e-23,
    4.6831036423973365296066286933333e-24,
    -1.0400213691985747236513382399999e-24,
    2.33491056773015100517777408e-25,
    -5.2956825323318615788049749333333e-26,
    1.2126341952959756829196287999999e-26,
    -2.8018897082289428760275626666666e-27,
    6.5292678987012873342593706666666e-28,
    -1.5337980061873346427835733333333e-28,
    3.6305884306364536682359466666666e-29,
    -8.6560755713629122479172266666666e-30,
    2.0779909972536284571238399999999e-30,
    -5.0211170221417221674325333333333e-31,
    1.2208360279441714184191999999999e-31,
    -2.9860056267039913454250666666666e-32,
};

inline constexpr double bm02cs[40] = {
    0.0950041514522838136933086133556,
    -3.801864682365670991748081566851e-4,
    2.258339301031481192951829927224e-6,
    -3.895725802372228764730621412605e-8,
    1.246886416512081697930990529725e-9,
    -6.065949022102503779803835058387e-11,
    4.008461651421746991015275971045e-12,
    -3.350998183398094218467298794574e-13,
    3.377119716517417367063264341996e-14,
    -3.964585901635012700569356295823e-15,
    5.286111503883857217387939744735e-16,
    -7.852519083450852313654640243493e-17,
    1.280300573386682201011634073449e-17,
    -2.263996296391429776287099244884e-18,
    4.300496929656790388646410290477e-19,
    -8.705749805132587079747535451455e-20,
    1.86586271396209514118144277205e-20,
    -4.210482486093065457345086972301e-21,
    9.956676964228400991581627417842e-22,
    -2.457357442805313359605921478547e-22,
    6.307692160762031568087353707059e-23,
    -1.678773691440740142693331172388e-23,
    4.620259064673904433770878136087e-24,
    -1.311782266860308732237693402496e-24,
    3.834087564116302827747922440276e-25,
    -1.151459324077741271072613293576e-25,
    3.547210007523338523076971345213e-26,
    -1.119218385815004646264355942176e-26,
    3.611879427629837831698404994257e-27,
    -1.190687765913333150092641762463e-27,
    4.005094059403968131802476449536e-28,
    -1.373169422452212390595193916017e-28,
    4.794199088742531585996491526437e-29,
    -1.702965627624109584006994476452e-29,
    6.149512428936330071503575161324e-30,
    -2.255766896581828349944300237242e-30,
    8.3997075092942994860616583532e-31,
    -3.172997595562602355567423936152e-31,
    1.215205298881298554583333026514e-31,
    -4.715852749754438693013210568045e-32,
};

inline constexpr double bth0cs[44] = {
    -0.24901780862128936717709793789967,
    4.8550299609623749241048615535485e-4,
    -5.4511837345017204950656273563505e-6,
    1.3558673059405964054377445929903e-7,
    -5.569139890222762622758321841492e-9,
    3.2609031824994335304004205719468e-10,
    -2.4918807862461341125237903877993e-11,
    2.3449377420882520554352413564891e-12,
    -2.6096534444310387762177574766136e-13,
    3.3353140420097395105869955014923e-14,
    -4.7890000440572684646750770557409e-15,
    7.5956178436192215972642568545248e-16,
    -1.3131556016891440382773397487633e-16,
    2.4483618345240857495426820738355e-17,
    -4.8805729810618777683256761918331e-18,
    1.0327285029786316149223756361204e-18,
    -2.3057633815057217157004744527025e-19,
    5.4044443001892693993017108483765e-20,
    -1.3240695194366572724155032882385e-20,
    3.3780795621371970203424792124722e-21,
    -8.9457629157111779003026926292299e-22,
    2.4519906889219317090899908651405e-22,
    -6.9388422876866318680139933157657e-23,
    2.0228278714890138392946303337791e-23,
    -6.0628500002335483105794195371764e-24,
    1.864974896403763538182378839627e-24,
    -5.8783732384849894560245036530867e-25,
    1.8958591447999563485531179503513e-25,
    -6.2481979372258858959291620728565e-26,
    2.1017901684551024686638633529074e-26,
    -7.2084300935209253690813933992446e-27,
    2.5181363892474240867156405976746e-27,
    -8.9518042258785778806143945953643e-28,
    3.2357237479762298533256235868587e-28,
    -1.1883010519855353657047144113796e-28,
    4.4306286907358104820579231941731e-29,
    -1.6761009648834829495792010135681e-29,
    6.4292946921207466972532393966088e-30,
    -2.4992261166978652421207213682763e-30,
    9.8399794299521955672828260355318e-31,
    -3.9220375242408016397989131626158e-31,
    1.5818107030056522138590618845692e-31,
    -6.4525506144890715944344098365426e-32,
    2.6611111369199356137177018346367e-32,
};

inline constexpr double bj1cs[19] = {
    -0.117261415133327865606240574524003,
    -0.253615218307906395623030884554698,
    0.0501270809844695685053656363203743,
    -0.00463151480962508191842619728789772,
    2.47996229415914024539124064592364e-4,
    -8.67894868627882584521246435176416e-6,
    2.14293917143793691502766250991292e-7,
    -3.93609307918317979229322764073061e-9,
    5.59118231794688004018248059864032e-11,
    -6.3276164046613930247769527401488e-13,
    5.84099161085724700326945563268266e-15,
    -4.48253381870125819039135059199999e-17,
    2.90538449262502466306018688e-19,
    -1.61173219784144165412118186666666e-21,
    7.73947881939274637298346666666666e-24,
    -3.24869378211199841143466666666666e-26,
    1.2022376772274102272e-28,
    -3.95201221265134933333333333333333e-31,
    1.16167808226645333333333333333333e-33,
};

inline constexpr double bm1cs[37] = {
    0.1069845452618063014969985308538,
    0.003274915039715964900729055143445,
    -2.987783266831698592030445777938e-5,
    8.331237177991974531393222669023e-7,
    -4.112665690302007304896381725498e-8,
    2.855344228789215220719757663161e-9,
    -2.485408305415623878060026596055e-10,
    2.543393338072582442742484397174e-11,
    -2.941045772822967523489750827909e-12,
    3.743392025493903309265056153626e-13,
    -5.149118293821167218720548243527e-14,
    7.552535949865143908034040764199e-15,
    -1.169409706828846444166290622464e-15,
    1.89656244943479157172182460506e-16,
    -3.201955368693286420664775316394e-17,
    5.599548399316204114484169905493e-18,
    -1.010215894730432443119390444544e-18,
    1.873844985727562983302042719573e-19,
    -3.563537470328580219274301439999e-20,
    6.931283819971238330422763519999e-21,
    -1.376059453406500152251408930133e-21,
    2.783430784107080220599779327999e-22,
    -5.727595364320561689348669439999e-23,
    1.197361445918892672535756799999e-23,
    -2.539928509891871976641440426666e-24,
    5.461378289657295973069619199999e-25,
    -1.189211341773320288986289493333e-25,
    2.620150977340081594957824e-26,
    -5.836810774255685901920938666666e-27,
    1.313743500080595773423615999999e-27,
    -2.985814622510380355332778666666e-28,
    6.848390471334604937625599999999e-29,
    -1.58440156822247672119296e-29,
    3.695641006570938054301013333333e-30,
    -8.687115921144668243012266666666e-31,
    2.057080846158763462929066666666e-31,
    -4.905225761116225518523733333333e-32,
};

inline constexpr double bt12cs[39] = {
    0.73823860128742974662620839792764,
    -0.0033361113174483906384470147681189,
    6.1463454888046964698514899420186e-5,
    -2.4024585161602374264977635469568e-6,
    1.4663555577509746153210591997204e-7,
    -1.1841917305589180567005147504983e-8,
    1.1574198963919197052125466303055e-9,
    -1.3001161129439187449366007794571e-10,
    1.6245391141361731937742166273667e-11,
    -2.2089636821403188752155441770128e-12,
    3.2180304258553177090474358653778e-13,
    -4.9653147932768480785552021135381e-14,
    8.0438900432847825985558882639317e-15,
    -1.3589121310161291384694712682282e-15,
    2.3810504397147214869676529605973e-16,
    -4.3081466363849106724471241420799e-17,
    8.02025440327710024349935125504e-18,
    -1.5316310642462311864230027468799e-18,
    2.9928606352715568924073040554666e-19,
    -5.9709964658085443393815636650666e-20,
    1.2140289669415185024160852650666e-20,
    -2.5115114696612948901006977706666e-21,
    5.2790567170328744850738380799999e-22,
    -1.1260509227550498324361161386666e-22,
    2.43482773595763266596634624e-23,
    -5.3317261236931800130038442666666e-24,
    1.1813615059707121039205990399999e-24,
    -2.6465368283353523514856789333333e-25,
    5.9903394041361503945577813333333e-26,
    -1.3690854630829503109136383999999e-26,
    3.1576790154380228326413653333333e-27,
    -7.3457915082084356491400533333333e-28,
    1.722808148072274793070592e-28,
    -4.07169079612865079410688e-29,
    9.6934745136779622700373333333333e-30,
    -2.3237636337765716765354666666666e-30,
    5.6074510673522029406890666666666e-31,
    -1.3616465391539005860522666666666e-31,
    3.3263109233894654388906666666666e-32,
};

inline constexpr double bm12cs[40] = {
    0.09807979156233050027272093546937,
    0.001150961189504685306175483484602,
    -4.312482164338205409889358097732e-6,
    5.951839610088816307813029801832e-8,
    -1.704844019826909857400701586478e-9,
    7.798265413611109508658173827401e-11,
    -4.958986126766415809491754951865e-12,
    4.038432416421141516838202265144e-13,
    -3.993046163725175445765483846645e-14,
    4.619886183118966494313342432775e-15,
    -6.089208019095383301345472619333e-16,
    8.960930916433876482157048041249e-17,
    -1.449629423942023122916518918925e-17,
    2.546463158537776056165149648068e-18,
    -4.80947287464783644425926371862e-19,
    9.687684668292599049087275839124e-20,
    -2.067213372277966023245038117551e-20,
    4.64665155915038473180276780959e-21,
    -1.094966128848334138241351328339e-21,
    2.693892797288682860905707612785e-22,
    -6.894992910930374477818970026857e-23,
    1.83026826275206290989066855474e-23,
    -5.025064246351916428156113553224e-24,
    1.423545194454806039631693634194e-24,
    -4.152191203616450388068886769801e-25,
    1.244609201503979325882330076547e-25,
    -3.827336370569304299431918661286e-26,
    1.205591357815617535374723981835e-26,
    -3.884536246376488076431859361124e-27,
    1.278689528720409721904895283461e-27,
    -4.295146689447946272061936915912e-28,
    1.470689117829070886456802707983e-28,
    -5.128315665106073128180374017796e-29,
    1.819509585471169385481437373286e-29,
    -6.563031314841980867618635050373e-30,
    2.404898976919960653198914875834e-30,
    -8.945966744690612473234958242979e-31,
    3.37608516065723102663714897824e-31,
    -1.291791454620656360913099916966e-31,
    5.008634462958810520684951501254e-32,
};

inline constexpr double bth1cs[44] = {
    0.74749957203587276055443483969695,
    -0.0012400777144651711252545777541384,
    9.9252442404424527376641497689592e-6,
    -2.0303690737159711052419375375608e-7,
    7.5359617705690885712184017583629e-9,
    -4.1661612715343550107630023856228e-10,
    3.0701618070834890481245102091216e-11,
    -2.8178499637605213992324008883924e-12,
    3.0790696739040295476028146821647e-13,
    -3.8803300262803434112787347554781e-14,
    5.5096039608630904934561726208562e-15,
    -8.6590060768383779940103398953994e-16,
    1.4856049141536749003423689060683e-16,
    -2.7519529815904085805371212125009e-17,
    5.4550796090481089625036223640923e-18,
    -1.1486534501983642749543631027177e-18,
    2.5535213377973900223199052533522e-19,
    -5.9621490197413450395768287907849e-20,
    1.4556622902372718620288302005833e-20,
    -3.7022185422450538201579776019593e-21,
    9.7763074125345357664168434517924e-22,
    -2.6726821639668488468723775393052e-22,
    7.5453300384983271794038190655764e-23,
    -2.1947899919802744897892383371647e-23,
    6.5648394623955262178906999817493e-24,
    -2.0155604298370207570784076869519e-24,
    6.341776855677614349214466718567e-25,
    -2.0419277885337895634813769955591e-25,
    6.7191464220720567486658980018551e-26,
    -2.2569079110207573595709003687336e-26,
    7.7297719892989706370926959871929e-27,
    -2.696744451229464091321142408092e-27,
    9.5749344518502698072295521933627e-28,
    -3.4569168448890113000175680827627e-28,
    1.2681234817398436504211986238374e-28,
    -4.7232536630722639860464993713445e-29,
    1.7850008478186376177858619796417e-29,
    -6.8404361004510395406215223566746e-30,
    2.6566028671720419358293422672212e-30,
    -1.045040252791445291771416148467e-30,
    4.1618290825377144306861917197064e-31,
    -1.6771639203643714856501347882887e-31,
    6.8361997776664389173535928028528e-32,
    -2.817224786123364116673957462281e-32,
};

// Term counts for double precision, as in the SLATEC INITDS tables.
inline constexpr int ntj0 = 12, nbm0 = 15, nbt02 = 16, nbm02 = 13, nbth0 = 14;
inline constexpr int ntj1 = 12, nbm1 = 15, nbt12 = 16, nbm12 = 13, nbth1 = 14;

inline constexpr double pi4 = std::numbers::pi / 4.0;

} // namespace detail

/// Bessel function of the first kind, order zero.
inline double j0(double x)
{
    using namespace detail;
    x = std::abs(x);
    const double xsml = std::sqrt(std::numeric_limits<double>::epsilon() * 8);
    if (x <= 4.0) {
        if (x < xsml) return 1.0;
        return csevl(0.125 * x * x - 1.0, bj0cs, ntj0);
    }
    double ampl, theta;
    if (x <= 8.0) {
        const double z = (128.0 / (x * x) - 5.0) / 3.0;
        ampl = (csevl(z, bm0cs, nbm0) + 0.75) / std::sqrt(x);
        theta = x - pi4 + csevl(z, bt02cs, nbt02) / x;
    } else {
        if (x > 0.5 / std::numeric_limits<double>::epsilon())
            throw std::domain_error("bessel::j0: argument too large, phase has no precision");
        const double z = 128.0 / (x * x) - 1.0;
        ampl = (csevl(z, bm02cs, nbm02) + 0.75) / std::sqrt(x);
        theta = x - pi4 + csevl(z, bth0cs, nbth0) / x;
    }
    return ampl * std::cos(theta);
}

/// Bessel function of the first kind, order one.  Odd in x.
inline double j1(double x)
{
    using namespace detail;
    const double ax = std::abs(x);
    const double xsml = std::sqrt(std::numeric_limits<double>::epsilon() * 8);
    double value;
    if (ax <= 4.0) {
        if (ax <= xsml) return 0.5 * x;
        return x * (csevl(0.125 * ax * ax - 1.0, bj1cs, ntj1) + 0.25);
    }
    double ampl, theta;
    if (ax <= 8.0) {
        const double z = (128.0 / (ax * ax) - 5.0) / 3.0;
        ampl = (csevl(z, bm1cs, nbm1) + 0.75) / std::sqrt(ax);
        theta = ax - 3.0 * pi4 + csevl(z, bt12cs, nbt12) / ax;
    } else {
        if (ax > 0.5 / std::numeric_limits<double>::epsilon())
            throw std::domain_error("bessel::j1: argument too large, phase has no precision");
        const double z = 128.0 / (ax * ax) - 1.0;
        ampl = (csevl(z, bm12cs, nbm12) + 0.75) / std::sqrt(ax);
        theta = ax - 3.0 * pi4 + csevl(z, bth1cs, nbth1) / ax;
    }
    value = ampl * std::cos(theta);
    return x < 0.0 ? -value : value;
}

/// n-th positive zero of J1 (n = 1, 2, ...).  McMahon's asymptotic
/// expansion for nu = 1 followed by one Newton step with
/// J1'(t) = J0(t) - J1(t)/t.
inline double j1_zero(int n)
{
    assert(n >= 1);
    const double beta = (n + 0.25) * std::numbers::pi;
    const double b2 = beta * beta;
    double t = beta - (3.0 / 8.0) / beta + (3.0 / 128.0) / (beta * b2) -
               (1179.0 / 5120.0) / (beta * b2 * b2);
    for (int it = 0; it < (n < 3 ? 2 : 1); ++it) {
        const double f = j1(t);
        const double fp = j0(t) - f / t;
        t -= f / fp;
    }
    return t;
}

} // namespace casimir::bessel
