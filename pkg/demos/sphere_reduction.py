"""Reducing so(3)* to the unit sphere: the bracket table modulo the Casimir ideal."""
from gradedpoisson import algebraic_reduce, graded_reduce, parse
from gradedpoisson.corpus import path

problem = parse(path("sphere").read_text()).to_problem()
algebraic = algebraic_reduce(problem)
graded = graded_reduce(problem, seed=3)

for row in algebraic.rows():
    print(row)
print("Jacobi on generator triples:", algebraic.jacobi.verdict.value)
print("graded route gives the same table:", algebraic.same_entries(graded))
