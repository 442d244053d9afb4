"""Second-class constraints x3 = x4 = 0 in standard R^4 and their Dirac bracket."""
from gradedpoisson import check_thm_a2, parse, reduce
from gradedpoisson.corpus import path

problem = parse(path("dirac").read_text()).to_problem()
print("\n".join(problem.describe()))

hypotheses = check_thm_a2(problem)
for check in hypotheses.checks:
    print(f"{check.verdict.value:9} {check.name}")

result = reduce(problem)
print()
print(result.algebraic.render().split("\n[")[0])
print("routes agree:", result.agreement.holds)
print("lift independence:", result.lifts.holds)
