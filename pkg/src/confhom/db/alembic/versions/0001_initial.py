from __future__ import annotations

from alembic import op
import sqlalchemy as sa

# revision identifiers, used by Alembic.
revision = "0001_initial"
down_revision = None
branch_labels = None
depends_on = None


def upgrade() -> None:
    op.create_table(
        "homology_rows",
        sa.Column("id", sa.Integer(), autoincrement=True, nullable=False),
        sa.Column("g", sa.Integer(), nullable=False),
        sa.Column("p", sa.Integer(), nullable=True),
        sa.Column("coeff", sa.String(), nullable=False),
        sa.Column("n", sa.Integer(), nullable=False),
        sa.Column("i", sa.Integer(), nullable=False),
        sa.Column("dim", sa.Integer(), nullable=False),
        sa.Column("torsion", sa.Text(), nullable=False),
        sa.Column("pipeline", sa.String(), nullable=False),
        sa.Column(
            "computed_at",
            sa.DateTime(),
            server_default=sa.func.now(),
            nullable=False,
        ),
        sa.PrimaryKeyConstraint("id"),
        sa.UniqueConstraint("g", "coeff", "n", "i", "pipeline", name="uq_homology_row"),
    )
    op.create_table(
        "job_runs",
        sa.Column("id", sa.Integer(), autoincrement=True, nullable=False),
        sa.Column("command", sa.String(), nullable=False),
        sa.Column("status", sa.String(), nullable=False),
        sa.Column("config_json", sa.Text(), nullable=False),
        sa.Column("envelope_json", sa.Text(), nullable=False),
        sa.Column(
            "created_at",
            sa.DateTime(),
            server_default=sa.func.now(),
            nullable=False,
        ),
        sa.PrimaryKeyConstraint("id"),
    )
    op.create_index("idx_homology_slice", "homology_rows", ["g", "coeff", "n", "pipeline"])
    op.create_index("idx_job_runs_command", "job_runs", ["command", "created_at"])


def downgrade() -> None:
    op.drop_index("idx_job_runs_command", table_name="job_runs")
    op.drop_index("idx_homology_slice", table_name="homology_rows")
    op.drop_table("job_runs")
    op.drop_table("homology_rows")
